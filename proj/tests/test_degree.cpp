#include <cmath>
#include <random>

#include "common.hpp"

namespace sgdeg {
namespace {

using test::vec;

TEST(DegreeFormula, TwoVertexCases) {
  for (double c : {-1.0, 0.0, 2.0}) {
    EXPECT_EQ(degree_formula(test::case1(c)), -1);
    EXPECT_EQ(degree_formula(test::case2(c)), 0);
    EXPECT_EQ(degree_formula(test::case3(c)), 0);
    EXPECT_EQ(degree_formula(test::case4(c)), 1);
  }
}

TEST(DegreeFormula, NonpositiveNonnegativeRow) {
  const Graph g = path_graph(3);
  EXPECT_EQ(degree_formula({g, vec({-1, 0, -2}), vec({0, 1, 0}), 0.0}), 1);
  EXPECT_EQ(degree_formula({g, vec({-1, 0, -2}), vec({0, 0, 0}), -1.0}), 1);
  EXPECT_EQ(degree_formula({g, vec({-1, 0, -2}), vec({0, 0, 0}), 0.0}), 0);
  EXPECT_EQ(degree_formula({g, vec({-1, 0, -2}), vec({0, 0, 0}), 1.0}), 0);
  EXPECT_EQ(degree_formula({g, vec({0, 0, 0}), vec({1, 0, 0}), 1.0}), 1);
  EXPECT_EQ(degree_formula({g, vec({0, 0, 0}), vec({1, 0, 0}), -1.0}), 0);
}

TEST(DegreeFormula, SignChangingRowAndMirror) {
  const Graph g = path_graph(3);
  const VertexFunction hp = vec({1, -2, -2});  // integral -3
  const VertexFunction z = VertexFunction::Zero(3);
  EXPECT_EQ(degree_formula({g, hp, z, 1.0}), -1);
  EXPECT_EQ(degree_formula({g, hp, z, 0.0}), -1);
  EXPECT_EQ(degree_formula({g, vec({3, -2, -0.5}), z, 0.0}), 0);
  EXPECT_EQ(degree_formula({g, hp, z, -1.0}), 0);
  EXPECT_EQ(degree_formula({g, hp, vec({0, 1, 0}), 1.0}), 0);
  // u -> -u swaps (h+, h-, c) for (-h-, -h+, -c).
  std::mt19937_64 rng(37);
  for (int t = 0; t < 300; ++t) {
    const Graph r = random_graph(rng, 2 + t % 3);
    const std::size_t n = r.vertex_count();
    const Problem p{r, random_integer_function(rng, n, -2, 2), random_integer_function(rng, n, -2, 2),
                    static_cast<double>(std::uniform_int_distribution<int>(-2, 2)(rng))};
    if (is_zero(p.h_plus) && is_zero(p.h_minus)) continue;
    EXPECT_EQ(degree_formula(p), degree_formula(Problem{r, -p.h_minus, -p.h_plus, -p.c}));
  }
}

TEST(DegreeFormula, MatchedSets) {
  const Graph g = path_graph(3);
  EXPECT_EQ(degree_formula({g, vec({1, -1, 2}), vec({-1, 3, -1}), 0.5}), 1);
  EXPECT_EQ(degree_formula({g, vec({1, -1, -1}), vec({-1, 3, 1}), 0.5}), -1);
  EXPECT_EQ(degree_formula({g, vec({1, 1, 1}), vec({-1, -1, -1}), 0.5}), -1);
  EXPECT_EQ(degree_formula({g, vec({1, -1, -1}), vec({-1, -1, 1}), 0.5}), 0);
  EXPECT_ERRC(degree_formula({g, VertexFunction::Zero(3), VertexFunction::Zero(3), 0.5}), Errc::BothZero);
}

TEST(KWDegreeFormula, Rows) {
  const Graph g = two_vertex_graph();
  EXPECT_EQ(kw_degree_formula({g, vec({1, -1}), 1.0}), -1);
  EXPECT_EQ(kw_degree_formula({g, vec({1, -2}), 0.0}), -1);
  EXPECT_EQ(kw_degree_formula({g, vec({-1, -2}), -1.0}), 1);
  EXPECT_EQ(kw_degree_formula({g, vec({-1, -1}), -1.0}), 1);  // ln(-c) is the unique solution
  EXPECT_EQ(kw_degree_formula({g, vec({-1, -2}), 1.0}), 0);
  EXPECT_EQ(kw_degree_formula({g, vec({2, -1}), 0.0}), 0);
  EXPECT_EQ(kw_degree_formula({g, vec({-1, -2}), 0.0}), 0);
  EXPECT_EQ(kw_degree_formula({g, vec({1, -2}), -1.0}), 0);
  EXPECT_ERRC(kw_degree_formula({g, vec({0, 0}), 1.0}), Errc::ZeroH);
}

TEST(DegreeNumeric, TwoVertexCasesMatch) {
  for (double c : {-1.0, 1.0}) {
    for (const Problem& p : {test::case1(c), test::case2(c), test::case3(c), test::case4(c)}) {
      const DegreeReport r = degree_numeric(p);
      EXPECT_TRUE(r.radius_stable);
      EXPECT_EQ(r.agreement, Agreement::match) << "c=" << c << " h+=" << p.h_plus.transpose();
    }
  }
}

TEST(DegreeNumeric, DegenerateRootIsPerturbed) {
  // dF(0) = -Lap - 2 Id is singular on the unit two-vertex graph.
  const DegreeReport r = degree_numeric(test::case4(0));
  ASSERT_TRUE(r.numeric_degree);
  EXPECT_EQ(*r.numeric_degree, 1);
  EXPECT_EQ(r.agreement, Agreement::match);
  EXPECT_NE(r.c_enumerated, 0.0);
  EXPECT_LE(std::abs(r.c_enumerated), 1e-2);
  ASSERT_FALSE(r.notes.empty());
  EXPECT_NE(r.notes.back().find("Morse perturbation"), std::string::npos);
}

TEST(DegreeNumeric, BoundaryAtZeroIsNotPerturbed) {
  // Same degenerate root, but a table that jumps at c = 0: shifting c would
  // change the reference value, so the report stays formula-only.
  const auto jumping = [](double c) { return c > 0.0 ? 1 : 0; };
  const DegreeReport r = detail::degree_numeric_impl(test::case4(0), jumping, {}, 42, kDefaultStarts);
  EXPECT_EQ(r.agreement, Agreement::formula_only);
  EXPECT_FALSE(r.numeric_degree);
  EXPECT_EQ(r.c_enumerated, 0.0);
  ASSERT_FALSE(r.notes.empty());
  EXPECT_NE(r.notes.back().find("boundary"), std::string::npos);
}

TEST(DegreeNumeric, FirstRowOverlapIsNoted) {
  const DegreeReport r = degree_numeric(test::canonical(path_graph(3)));
  EXPECT_EQ(r.agreement, Agreement::match);
  EXPECT_EQ(*r.numeric_degree, 1);
  ASSERT_EQ(r.solutions.size(), 1u);
  EXPECT_LE(inf_norm(r.solutions[0].u), 1e-12);
  ASSERT_FALSE(r.notes.empty());
}

TEST(DegreeNumeric, KazdanWarner) {
  const DegreeReport r = degree_numeric(KWProblem{two_vertex_graph(), vec({1, -1}), 1.0});
  EXPECT_EQ(*r.formula_degree, -1);
  EXPECT_EQ(r.agreement, Agreement::match);
  EXPECT_ERRC(degree_numeric(KWProblem{two_vertex_graph(), vec({0, 0}), 1.0}), Errc::ZeroH);
  EXPECT_ERRC(degree_numeric(Problem{two_vertex_graph(), vec({0, 0}), vec({0, 0}), 1.0}), Errc::BothZero);
}

TEST(DegreeNumeric, SpecialConstantData) {
  for (std::size_t n : {2u, 3u, 4u}) {
    const Graph g = path_graph(n);
    const double lambda = largest_laplacian_eigenvalue(g);
    const auto m = static_cast<Eigen::Index>(n);
    const Problem p{g, VertexFunction::Constant(m, lambda), VertexFunction::Constant(m, -lambda), 0.5};
    const DegreeReport r = degree_numeric(p);
    ASSERT_EQ(r.solutions.size(), 1u);
    EXPECT_EQ(*r.numeric_degree, n % 2 == 0 ? 1 : -1);
    EXPECT_EQ(r.agreement, Agreement::match);
  }
}

TEST(DegreeNumeric, Deterministic) {
  const Problem p{path_graph(3), vec({1, -2, -2}), vec({0.01, 0.01, 0.01}), -0.05};
  const DegreeReport a = degree_numeric(p, {}, 9), b = degree_numeric(p, {}, 9);
  ASSERT_EQ(a.solutions.size(), b.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i) EXPECT_EQ(a.solutions[i].u, b.solutions[i].u);
  EXPECT_EQ(a.solutions.size(), 2u);
  EXPECT_EQ(*a.numeric_degree, 0);
}

TEST(SelectRadius, Case4StabilisesAtFirstComparison) {
  const RadiusSelection rs = select_radius(test::case4(1), {}, 42);
  EXPECT_TRUE(rs.stable);
  // The first comparison is R = 16 against R = 8.
  EXPECT_EQ(rs.radius, 2 * kFirstRadius);
  EXPECT_EQ(rs.counts, (std::vector<std::size_t>{1, 1}));
}

TEST(SelectRadius, RootsBeyondTheBallCount) {
  // F = e^(u - 40) - 1 has the single root u = 40; starts in [-8, 8] reach it,
  // so the small radii must not be declared stable and empty.
  const double a = std::exp(-40.0);
  const Problem p{two_vertex_graph(), vec({-a, -a}), vec({0, 0}), -1.0};
  const RadiusSelection rs = select_radius(p, {}, 42);
  EXPECT_TRUE(rs.stable);
  EXPECT_EQ(rs.radius, 128.0);
  ASSERT_EQ(rs.solutions.size(), 1u);
  EXPECT_NEAR(rs.solutions[0].u(0), 40.0, 1e-9);
  EXPECT_EQ(rs.counts.front(), 0u);
}

TEST(SelectRadius, EmptySetIsStable) {
  const RadiusSelection rs = select_radius(test::case2(0), {}, 42);
  EXPECT_TRUE(rs.stable);
  EXPECT_TRUE(rs.solutions.empty());
}

TEST(V0Tools, DecompositionAndErrors) {
  const auto d = v0_decomposition(test::case1(0));
  ASSERT_TRUE(d);
  EXPECT_EQ(d->v0, VertexSet{0});
  EXPECT_EQ(d->complement, VertexSet{1});
  EXPECT_FALSE(v0_decomposition(test::case2(0)));
  EXPECT_ERRC(decompose(path_graph(3), {}), Errc::EmptyV0);
}

TEST(V0Tools, HarmonicExtensionOnPath) {
  const Graph g = path_graph(3);
  const VertexFunction u = harmonic_extension(g, {0, 2}, vec({1, 0}));
  EXPECT_NEAR(u(1), 0.5, 1e-15);
  EXPECT_EQ(u(0), 1.0);
  EXPECT_EQ(u(2), 0.0);
  EXPECT_ERRC(harmonic_extension(g, {0, 2}, vec({1})), Errc::DimensionMismatch);
}

TEST(V0Tools, SchurOperatorMatchesExtension) {
  Eigen::MatrixXd expected(2, 2);
  expected << -0.5, 0.5, 0.5, -0.5;
  EXPECT_LE((schur_operator(path_graph(3), {0, 2}) - expected).cwiseAbs().maxCoeff(), 1e-15);

  std::mt19937_64 rng(41);
  for (int t = 0; t < 30; ++t) {
    const Graph g = random_graph(rng, 3 + t % 5);
    const VertexSet v0{0, g.vertex_count() - 1};
    const LinearOperator l = schur_operator(g, v0);
    const VertexFunction phi = random_function(rng, 2, -1, 1);
    const VertexFunction lap = laplacian(g, harmonic_extension(g, v0, phi));
    const VertexFunction lphi = l * phi;
    EXPECT_NEAR(lphi(0), lap(0), 1e-9);
    EXPECT_NEAR(lphi(1), lap(static_cast<Eigen::Index>(g.vertex_count() - 1)), 1e-9);
  }
  // V0 = V: no interior, the operator is the Laplacian matrix itself.
  EXPECT_EQ(schur_operator(two_vertex_graph(), {0, 1}), laplacian_matrix(two_vertex_graph()));
}

}  // namespace
}  // namespace sgdeg
