#include <cmath>
#include <random>

#include "common.hpp"

namespace sgdeg {
namespace {

using test::vec;

double scaled_tol(const Problem& p, const Solution& s, const SolverConfig& cfg = {}) {
  return cfg.tol * std::max(1.0, residual_scale(p, s.u));
}

TEST(NewtonSolve, Case4ClosedForm) {
  const Solution s = newton_solve(test::case4(1), vec({0, 0}));
  EXPECT_LE(inf_norm(s.u - test::case4_solution(1)), 1e-12);
  EXPECT_NEAR(s.u(0), 0.48121182505960347, 1e-12);
  EXPECT_LE(inf_norm(residual(test::case4(1), s.u)), 1e-12);
  EXPECT_EQ(s.det_sign, 1);
  EXPECT_EQ(s.converged_from, vec({0, 0}));
}

TEST(NewtonSolve, DegenerateRootAtStart) {
  // c = 0: u = 0 solves exactly and dF(0) is singular.
  const Solution s = newton_solve(test::case4(0), vec({0, 0}));
  EXPECT_EQ(s.u, vec({0, 0}));
  EXPECT_EQ(s.det_sign, 0);
  EXPECT_EQ(s.iterations, 0);
}

TEST(NewtonSolve, Case1ClosedForm) {
  const Solution s = newton_solve(test::case1(1), vec({0, 0}));
  EXPECT_LE(inf_norm(s.u - vec({std::log(1 + std::sqrt(2.0)), std::log(1 + std::sqrt(2.0)) - 1})), 1e-12);
  EXPECT_EQ(s.det_sign, -1);
}

TEST(NewtonSolve, CanonicalFromRandomStarts) {
  const Problem p{two_vertex_graph(), vec({-1, -1}), vec({1, 1}), 0.0};
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const Solution s = newton_solve(p, random_function(rng, 2, -2, 2));
    EXPECT_LE(inf_norm(s.u), 1e-12);
  }
}

TEST(NewtonSolve, NonexistenceFails) {
  // Case 2 has no solution; the solver must not report one.
  for (const auto& u0 : {vec({0, 0}), vec({3, -3}), vec({-5, 5})}) {
    try {
      newton_solve(test::case2(0), u0);
      ADD_FAILURE() << "converged on a problem without solutions";
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == Errc::NoConvergence || e.code() == Errc::Diverged || e.code() == Errc::SingularJacobian)
          << e.what();
    }
  }
}

TEST(NewtonSolve, RejectsPseudoRootAtInfinity) {
  // h- == 0 and c == 0: F -> 0 as u -> -infinity without vanishing.
  const Problem p{two_vertex_graph(), vec({1, -2}), vec({0, 0}), 0.0};
  for (const auto& u0 : {vec({-30, -30}), vec({-60, -61})}) {
    try {
      const Solution s = newton_solve(p, u0);
      EXPECT_GT(s.u.maxCoeff(), -20.0) << "accepted a point far out at -infinity";
    } catch (const Error&) {
    }
  }
}

TEST(NewtonSolve, InputErrors) {
  EXPECT_ERRC(newton_solve(test::case4(1), vec({0, 0, 0})), Errc::DimensionMismatch);
  EXPECT_ERRC(newton_solve(test::case4(1), vec({800, 0})), Errc::Diverged);
  const Problem z{two_vertex_graph(), vec({0, 0}), vec({0, 0}), 1.0};
  EXPECT_ERRC(newton_solve(z, vec({0, 0})), Errc::SingularJacobian);
}

TEST(EnumerateSolutions, Case4ExactlyOne) {
  const Enumeration e = enumerate_solutions(test::case4(1), 10.0, 500, {}, 42);
  ASSERT_EQ(e.solutions.size(), 1u);
  EXPECT_LE(inf_norm(e.solutions[0].u - test::case4_solution(1)), 1e-10);
  EXPECT_EQ(e.starts, 500u);
}

TEST(EnumerateSolutions, Case2Empty) {
  for (double c : {-1.0, 0.0, 1.0}) EXPECT_TRUE(enumerate_solutions(test::case2(c), 20.0, 200, {}, 42).solutions.empty());
}

TEST(EnumerateSolutions, DegenerateFamily) {
  const Problem p{path_graph(3), VertexFunction::Zero(3), VertexFunction::Zero(3), 0.0};
  const Enumeration e = enumerate_solutions(p, 8.0, 50, {}, 42);
  EXPECT_TRUE(e.degenerate);
  ASSERT_EQ(e.solutions.size(), 1u);
  EXPECT_EQ(e.solutions[0].u, VertexFunction::Zero(3));
  Problem q = p;
  q.c = 1.0;
  EXPECT_TRUE(enumerate_solutions(q, 8.0, 50, {}, 42).solutions.empty());
}

TEST(EnumerateSolutions, SortedDistinctResidualCheckedAndDeterministic) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 20; ++t) {
    const Graph g = random_graph(rng, 2 + t % 3);
    const std::size_t n = g.vertex_count();
    const Problem p{g, random_integer_function(rng, n, -2, 2), random_integer_function(rng, n, -2, 2),
                    std::uniform_real_distribution<double>(-2, 2)(rng)};
    const SolverConfig cfg;
    const Enumeration a = enumerate_solutions(p, 8.0, 100, cfg, 7);
    const Enumeration b = enumerate_solutions(p, 8.0, 100, cfg, 7);
    ASSERT_EQ(a.solutions.size(), b.solutions.size());
    for (std::size_t i = 0; i < a.solutions.size(); ++i) {
      EXPECT_EQ(a.solutions[i].u, b.solutions[i].u);
      EXPECT_LE(inf_norm(residual(p, a.solutions[i].u)), scaled_tol(p, a.solutions[i]));
      EXPECT_LE(inf_norm(a.solutions[i].u), 8.0);
      for (std::size_t j = i + 1; j < a.solutions.size(); ++j) {
        EXPECT_GT(inf_norm(a.solutions[i].u - a.solutions[j].u), cfg.dedup_tol);
        EXPECT_TRUE(lexicographic_less(a.solutions[i].u, a.solutions[j].u));
      }
    }
  }
}

TEST(MultistartPoints, SignPatternsFirstThenRandom) {
  const auto pts = multistart_points(2, 8.0, 20, 42);
  ASSERT_EQ(pts.size(), 20u);
  for (std::size_t i = 0; i < 9; ++i)
    for (Eigen::Index k = 0; k < 2; ++k) EXPECT_TRUE(pts[i](k) == 0.0 || std::abs(pts[i](k)) == 4.0);
  for (std::size_t i = 9; i < 20; ++i) EXPECT_LE(inf_norm(pts[i]), 8.0);
  EXPECT_EQ(multistart_points(2, 8.0, 20, 42)[15], pts[15]);
  EXPECT_NE(multistart_points(2, 8.0, 20, 43)[15], pts[15]);
}

TEST(BruteForce2V, Case1MatchesClosedForm) {
  const auto roots = brute_force_2v(test::case1(1), 5.0, 400);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_LE(inf_norm(roots[0] - test::case1_solution(1)), 1e-8);
}

TEST(BruteForce2V, NonexistenceAndCase4) {
  for (double c : {-1.0, 0.0, 1.0}) EXPECT_TRUE(brute_force_2v(test::case2(c), 8.0, 200).empty());
  const auto roots = brute_force_2v(test::case4(0), 8.0, 201);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_LE(inf_norm(roots[0]), 1e-6);
  EXPECT_ERRC(brute_force_2v(test::canonical(path_graph(3)), 8.0, 10), Errc::NotTwoVertex);
}

// Newton multistart and the derivative-free grid search are independent
// root finders; they must see the same roots on two vertices.
TEST(BruteForce2V, AgreesWithEnumeration) {
  std::mt19937_64 rng(31);
  int compared = 0;
  for (int t = 0; t < 50; ++t) {
    const Problem p{two_vertex_graph(), random_integer_function(rng, 2, -2, 2), random_integer_function(rng, 2, -2, 2),
                    std::uniform_real_distribution<double>(-3, 3)(rng)};
    if (is_zero(p.h_plus) && is_zero(p.h_minus)) continue;
    const Enumeration e = enumerate_solutions(p, 8.0, 200, {}, 42);
    if (std::any_of(e.solutions.begin(), e.solutions.end(), [](const Solution& s) { return inf_norm(s.u) > 6.0; }))
      continue;  // roots near the edge of the grid are out of scope
    const auto roots = brute_force_2v(p, 8.0, 320);
    ASSERT_EQ(roots.size(), e.solutions.size()) << "h+=" << p.h_plus.transpose() << " h-=" << p.h_minus.transpose()
                                                << " c=" << p.c;
    for (std::size_t i = 0; i < roots.size(); ++i) EXPECT_LE(inf_norm(roots[i] - e.solutions[i].u), 1e-6);
    ++compared;
  }
  EXPECT_GE(compared, 40);
}

TEST(MinimizeEnergyBoxed, CanonicalInstance) {
  const Problem p = test::canonical(path_graph(3));
  const Solution s = minimize_energy_boxed(p, VertexFunction::Constant(3, -1), VertexFunction::Constant(3, 2));
  EXPECT_LE(inf_norm(s.u), 1e-12);
}

TEST(MinimizeEnergyBoxed, PointBox) {
  const Problem p = test::case4(1);
  const VertexFunction u = test::case4_solution(1);
  const Solution s = minimize_energy_boxed(p, u, u);
  EXPECT_LE(inf_norm(s.u - u), 1e-12);
}

TEST(MinimizeEnergyBoxed, OrientationIsChecked) {
  // In Case 4 constants below the solution have F > 0 (supersolutions), so
  // lower == 0 is not a subsolution.
  EXPECT_ERRC(minimize_energy_boxed(test::case4(1), vec({0, 0}), vec({2, 2})), Errc::NotSubsolution);
  const Problem p = test::canonical(two_vertex_graph());
  EXPECT_ERRC(minimize_energy_boxed(p, vec({-1, -1}), vec({-0.5, -0.5})), Errc::NotSupersolution);
  EXPECT_ERRC(minimize_energy_boxed(p, vec({-1, 1}), vec({0, 0})), Errc::BoxEmpty);
}

TEST(MinimizeEnergyBoxed, SignChangingWeightBetweenConstantAndSolution) {
  // Subsolution: a low constant. Supersolution: a solution at a smaller c,
  // which has residual c - c' > 0 for the current c.
  const Problem base{path_graph(3), vec({1, -2, -2}), vec({0.01, 0.01, 0.01}), -0.05};
  Problem lower_c = base;
  lower_c.c = -0.08;
  const Enumeration e = enumerate_solutions(lower_c, 16.0, 200, {}, 42);
  ASSERT_FALSE(e.solutions.empty());
  const double a = find_constant_subsolution(base);
  const VertexFunction lower = VertexFunction::Constant(3, a);
  for (const Solution& upper : e.solutions) {
    if ((lower.array() > upper.u.array()).any()) continue;
    const Solution s = minimize_energy_boxed(base, lower, upper.u);
    EXPECT_LE(inf_norm(residual(base, s.u)), scaled_tol(base, s));
    EXPECT_TRUE((s.u.array() >= lower.array() - 1e-9).all() && (s.u.array() <= upper.u.array() + 1e-9).all());
    return;
  }
  FAIL() << "no solution at c' lies above the constant subsolution";
}

TEST(FindConstantSubsolution, Values) {
  const Graph g = two_vertex_graph();
  const Problem p1{g, vec({1, -1}), vec({0, 0}), -1.0};
  EXPECT_DOUBLE_EQ(find_constant_subsolution(p1), -1.0);
  EXPECT_LE(residual(p1, vec({-1, -1})).maxCoeff(), 0.0);
  const Problem pe{g, vec({1, -1}), vec({0, 0}), -std::exp(1.0)};
  EXPECT_NEAR(find_constant_subsolution(pe), 0.0, 1e-15);
  EXPECT_ERRC(find_constant_subsolution(Problem{g, vec({1, -1}), vec({0, 0}), 0.0}), Errc::PreconditionFailed);
  EXPECT_ERRC(find_constant_subsolution(Problem{g, vec({0, 0}), vec({1, 0}), -1.0}), Errc::PreconditionFailed);
  // h- < 0 can push the constant above the subsolution threshold.
  EXPECT_ERRC(find_constant_subsolution(Problem{g, vec({1, 1}), vec({-100, -100}), -1.0}), Errc::NotSubsolutionAfterAll);
}

TEST(Continuation, DeformationToCanonicalInstance) {
  const Graph g = path_graph(3);
  const VertexFunction hp = vec({-1, -2, 0}), hm = vec({0, 1, 2});
  const double c = 0.7;
  const ProblemFamily family = [&](double t) {
    return Problem{g, (1 - t) * hp - t * VertexFunction::Ones(3), (1 - t) * hm + t * VertexFunction::Ones(3), (1 - t) * c};
  };
  const auto branch = continuation(family, VertexFunction::Zero(3), 20);
  EXPECT_EQ(branch.front().t, 0.0);
  EXPECT_EQ(branch.back().t, 1.0);
  EXPECT_LE(inf_norm(branch.back().solution.u), 1e-12);
  for (std::size_t i = 1; i < branch.size(); ++i) EXPECT_GT(branch[i].t, branch[i - 1].t);
}

TEST(Continuation, ConstantFamilyIsConstant) {
  const ProblemFamily family = [](double) { return test::case4(1); };
  for (const auto& bp : continuation(family, vec({0, 0}), 10))
    EXPECT_LE(inf_norm(bp.solution.u - test::case4_solution(1)), 1e-10);
}

TEST(Continuation, Case3LosesBranchBeforeZero) {
  // Solutions need c > 0; the pair present at c = 3 meets in a fold on the
  // way down, so tracking c from 3 to 0 cannot finish.
  const ProblemFamily family = [](double t) { return test::case3(3.0 * (1.0 - t)); };
  const Solution start = newton_solve(test::case3(3.0), vec({1, 1}));
  EXPECT_EQ(start.det_sign, 1);
  EXPECT_ERRC(continuation(family, start.u, 10), Errc::BranchLost);
}

TEST(Enumerate, DegenerateRootIsOneRoot) {
  // At c = 0 the antisymmetric direction of Case 4 is a triple root: F rounds
  // to zero on a segment around 0, and the cluster must count once.
  const Enumeration e = enumerate_solutions(test::case4(0), 10.0, 500, {}, 42);
  ASSERT_EQ(e.solutions.size(), 1u);
  EXPECT_EQ(inf_norm(e.solutions[0].u), 0.0);
  EXPECT_EQ(e.solutions[0].det_sign, 0);
}

TEST(Enumerate, OutsideRootsAreReported) {
  const double a = std::exp(-40.0);
  const Problem p{two_vertex_graph(), vec({-a, -a}), vec({0, 0}), -1.0};
  const Enumeration e = enumerate_solutions(p, 8.0, 50, {}, 42);
  EXPECT_TRUE(e.solutions.empty());
  EXPECT_GT(e.outside_radius, 0u);
  ASSERT_EQ(e.outside.size(), 1u);
  EXPECT_NEAR(e.outside[0].u(1), 40.0, 1e-9);
}

}  // namespace
}  // namespace sgdeg
