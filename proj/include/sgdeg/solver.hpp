#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sgdeg/linalg.hpp"
#include "sgdeg/model.hpp"

namespace sgdeg {

struct SolverConfig {
  /// Residual infinity-norm target.
  double tol = 1e-12;
  int max_iter = 100;
  /// Infinity-distance below which two solutions are the same solution.
  double dedup_tol = 1e-6;
  /// Threshold on |det| of the row-equilibrated Jacobian.
  double morse_tol = 1e-10;
  /// Largest Newton step, infinity norm.
  double step_clamp = 10.0;
};

inline void validate_config(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0) || cfg.max_iter <= 0 || !(cfg.dedup_tol > 0.0) || !(cfg.morse_tol > 0.0) ||
      !(cfg.step_clamp > 0.0))
    throw Error(Errc::PreconditionFailed, "solver configuration values must be positive");
  if (!(cfg.dedup_tol > cfg.tol)) throw Error(Errc::PreconditionFailed, "dedup_tol must exceed tol");
}

struct Solution {
  VertexFunction u;
  double residual_inf_norm = 0.0;
  int det_sign = 0;
  int iterations = 0;
  VertexFunction converged_from;
  /// sigma_min / max(1, sigma_max) of dF at u.
  double conditioning = 1.0;
};

inline int jacobian_sign(const Problem& p, const VertexFunction& u, const SolverConfig& cfg) {
  return determinant_sign(jacobian(p, u), cfg.morse_tol).sign;
}

inline double inf_norm(const VertexFunction& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

namespace detail {

// A Newton correction this small (relative to |u|) marks a genuine root. It
// rejects points far out along directions where F decays to zero without
// vanishing, e.g. u -> -infinity when h- == 0 and c == 0: there F is tiny but
// the correction is of order one.
inline constexpr double kStepTol = 1e-9;

// Line search halvings before declaring stagnation.
inline constexpr int kMaxHalvings = 20;

inline constexpr double kUnderflowFloor = 1e-8;

// Roots whose dF has conditioning below kIllConditioned are resolved only to
// about eps^(1/k) along the kernel (k the multiplicity): F rounds to zero on a
// whole segment. Such roots closer than kClusterRadius (1 + |u|) are merged.
inline constexpr double kIllConditioned = 1e-6;
inline constexpr double kClusterRadius = 1e-4;

inline double conditioning(const LinearOperator& jac) {
  if (jac.size() == 0) return 1.0;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(jac).singularValues();
  return sv(sv.size() - 1) / std::max(1.0, sv(0));
}

// Largest magnitude of the exponential terms of F.
inline double nonlinear_size(const Problem& p, const VertexFunction& u) {
  const Eigen::ArrayXd eu = u.array().exp();
  return (p.h_plus.array().abs() * eu + p.h_minus.array().abs() / eu).maxCoeff();
}

inline Solution make_solution(const Problem& p, const VertexFunction& u, const VertexFunction& u0, int iters,
                              const SolverConfig& cfg) {
  Solution s;
  s.u = u;
  s.residual_inf_norm = inf_norm(residual(p, u));
  const LinearOperator jac = jacobian(p, u);
  s.det_sign = determinant_sign(jac, cfg.morse_tol).sign;
  s.conditioning = conditioning(jac);
  s.iterations = iters;
  s.converged_from = u0;
  return s;
}

}  // namespace detail

/// Damped Newton on F with a backtracking line search on ||F||_2.
///
/// Converged means ||F||_inf <= tol * max(1, scale of the terms of F) and a
/// Newton correction below 1e-9 (1 + ||u||_inf). A singular dF falls back to
/// the least-squares step, which can move u but not certify a root. Throws
/// SingularJacobian, NoConvergence or Diverged.
inline Solution newton_solve(const Problem& p, const VertexFunction& u0, const SolverConfig& cfg = {}) {
  validate_problem(p);
  detail::require_match(p.graph, u0, "u0");
  require_finite(u0, "u0");
  VertexFunction u = u0;
  VertexFunction f;
  try {
    f = residual(p, u);
  } catch (const Error& e) {
    throw Error(Errc::Diverged, e.what());
  }

  for (int it = 0; it <= cfg.max_iter; ++it) {
    const double fnorm = inf_norm(f);
    const double tol_eff = cfg.tol * std::max(1.0, residual_scale(p, u));
    const LinearOperator jac = jacobian(p, u);
    auto step = solve_dense(jac, -f);
    const double small_step = detail::kStepTol * (1.0 + inf_norm(u));
    if (step) {
      if (fnorm <= tol_eff && inf_norm(*step) <= small_step) return detail::make_solution(p, u, u0, it, cfg);
    } else {
      // Singular dF: move along the minimum-norm least-squares step, but never
      // accept a root on it, since it ignores the null direction.
      step = jac.completeOrthogonalDecomposition().solve(-f);
      if (!step->allFinite()) throw Error(Errc::SingularJacobian, "at iteration " + std::to_string(it));
      if (inf_norm(*step) <= small_step) {
        // A degenerate root, unless the exponential terms have underflowed
        // (then dF is singular only because u sits far out at infinity).
        if (fnorm <= tol_eff && detail::nonlinear_size(p, u) >= detail::kUnderflowFloor)
          return detail::make_solution(p, u, u0, it, cfg);
        throw Error(Errc::SingularJacobian, "at iteration " + std::to_string(it));
      }
    }
    VertexFunction s = std::move(*step);
    if (it == cfg.max_iter) break;

    const double snorm = inf_norm(s);
    if (snorm > cfg.step_clamp) s *= cfg.step_clamp / snorm;

    const double f2 = f.norm();
    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k <= detail::kMaxHalvings; ++k, lambda *= 0.5) {
      const VertexFunction trial = u + lambda * s;
      if (inf_norm(trial) > kOverflowGuard) continue;
      VertexFunction ft = residual(p, trial);
      if (ft.norm() < f2) {
        u = trial;
        f = std::move(ft);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (inf_norm(u + lambda * s) > kOverflowGuard)
        throw Error(Errc::Diverged, "iterate left the overflow guard");
      throw Error(Errc::NoConvergence, "line search stalled at ||F|| = " + std::to_string(fnorm));
    }
  }
  throw Error(Errc::NoConvergence, "max_iter exhausted");
}

struct Enumeration {
  /// Distinct solutions, sorted lexicographically by values.
  std::vector<Solution> solutions;
  std::size_t starts = 0;
  std::size_t failures = 0;
  /// Converged starts whose root lay outside the radius.
  std::size_t outside_radius = 0;
  /// Those roots, deduplicated.
  std::vector<Solution> outside;
  /// h+ == h- == 0 and c == 0: every constant solves, only u = 0 is listed.
  bool degenerate = false;
};

/// The deterministic start set: sign-pattern constants in {-R/2, 0, R/2}
/// over the first min(#V, 9) vertices, then uniform points of [-R, R]^V.
inline std::vector<VertexFunction> multistart_points(std::size_t n, double radius, std::size_t n_starts,
                                                     std::uint64_t seed) {
  std::vector<VertexFunction> starts;
  const std::size_t m = std::min<std::size_t>(n, 9);
  std::size_t patterns = 1;
  for (std::size_t i = 0; i < m; ++i) patterns *= 3;
  const double levels[3] = {0.0, -0.5 * radius, 0.5 * radius};
  for (std::size_t k = 0; k < patterns && starts.size() < n_starts; ++k) {
    VertexFunction u = VertexFunction::Zero(static_cast<Eigen::Index>(n));
    std::size_t code = k;
    for (std::size_t i = 0; i < m; ++i, code /= 3) u(static_cast<Eigen::Index>(i)) = levels[code % 3];
    starts.push_back(std::move(u));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-radius, radius);
  while (starts.size() < n_starts) {
    VertexFunction u(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = dist(rng);
    starts.push_back(std::move(u));
  }
  return starts;
}

inline bool lexicographic_less(const VertexFunction& a, const VertexFunction& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

inline bool same_solution(const Solution& a, const Solution& b, double tol) {
  const double d = inf_norm(a.u - b.u);
  if (d <= tol) return true;
  return a.conditioning <= detail::kIllConditioned && b.conditioning <= detail::kIllConditioned &&
         d <= detail::kClusterRadius * (1.0 + std::max(inf_norm(a.u), inf_norm(b.u)));
}

/// Adds `s` to `set` unless the same solution is already present. Returns
/// true when added. Within a cluster of ill-conditioned roots the most
/// singular one represents the cluster, with det_sign 0 once signs disagree.
inline bool insert_distinct(std::vector<Solution>& set, Solution s, double tol) {
  for (auto& t : set) {
    if (!same_solution(t, s, tol)) continue;
    if (inf_norm(t.u - s.u) > tol) {
      const int sign = t.det_sign == s.det_sign ? t.det_sign : 0;
      if (s.conditioning < t.conditioning) t = std::move(s);
      t.det_sign = sign == 0 ? 0 : t.det_sign;
    }
    return false;
  }
  set.push_back(std::move(s));
  return true;
}

inline void sort_solutions(std::vector<Solution>& set) {
  std::sort(set.begin(), set.end(), [](const Solution& a, const Solution& b) { return lexicographic_less(a.u, b.u); });
}

/// Multistart Newton: every solution with ||u||_inf <= radius that the start
/// set reaches, deduplicated and sorted. Completeness is heuristic.
inline Enumeration enumerate_solutions(const Problem& p, double radius, std::size_t n_starts,
                                       const SolverConfig& cfg, std::uint64_t seed) {
  validate_problem(p);
  if (!(radius > 0.0)) throw Error(Errc::PreconditionFailed, "radius must be positive");
  Enumeration out;
  const auto n = static_cast<Eigen::Index>(p.graph.vertex_count());

  if (is_zero(p.h_plus) && is_zero(p.h_minus)) {
    // -Lap u = -c integrates to c = 0: no solutions unless c == 0, and then
    // the constants form a continuum.
    if (p.c == 0.0) {
      Solution s;
      s.u = VertexFunction::Zero(n);
      s.converged_from = s.u;
      s.det_sign = 0;
      out.solutions.push_back(std::move(s));
      out.degenerate = true;
    }
    return out;
  }

  const auto starts = multistart_points(p.graph.vertex_count(), radius, n_starts, seed);
  out.starts = starts.size();
  for (const auto& u0 : starts) {
    Solution s;
    try {
      s = newton_solve(p, u0, cfg);
    } catch (const Error&) {
      ++out.failures;
      continue;
    }
    if (inf_norm(s.u) > radius) {
      ++out.outside_radius;
      insert_distinct(out.outside, std::move(s), cfg.dedup_tol);
      continue;
    }
    insert_distinct(out.solutions, std::move(s), cfg.dedup_tol);
  }
  sort_solutions(out.solutions);
  sort_solutions(out.outside);
  return out;
}

namespace detail {

inline VertexFunction clamp_box(const VertexFunction& u, const VertexFunction& lo, const VertexFunction& hi) {
  return u.cwiseMax(lo).cwiseMin(hi);
}

inline double check_slack(const Problem& p, const VertexFunction& u, const SolverConfig& cfg) {
  return cfg.tol * std::max(1.0, residual_scale(p, u));
}

}  // namespace detail

/// Minimizes the energy over the box lower <= u <= upper by projected
/// gradient descent (the mu-gradient of J is F), then polishes with Newton.
/// `lower` must be a subsolution (F <= 0) and `upper` a supersolution
/// (F >= 0); both are checked.
inline Solution minimize_energy_boxed(const Problem& p, const VertexFunction& lower, const VertexFunction& upper,
                                      const SolverConfig& cfg = {}) {
  validate_problem(p);
  detail::require_match(p.graph, lower, "lower");
  detail::require_match(p.graph, upper, "upper");
  for (Eigen::Index i = 0; i < lower.size(); ++i)
    if (lower(i) > upper(i))
      throw Error(Errc::BoxEmpty, "lower > upper at vertex " + p.graph.label(static_cast<Vertex>(i)));

  const VertexFunction f_lo = residual(p, lower);
  const double slack_lo = detail::check_slack(p, lower, cfg);
  for (Eigen::Index i = 0; i < f_lo.size(); ++i)
    if (f_lo(i) > slack_lo)
      throw Error(Errc::NotSubsolution, "F(lower) = " + std::to_string(f_lo(i)) + " > 0 at vertex " +
                                            p.graph.label(static_cast<Vertex>(i)));
  const VertexFunction f_hi = residual(p, upper);
  const double slack_hi = detail::check_slack(p, upper, cfg);
  for (Eigen::Index i = 0; i < f_hi.size(); ++i)
    if (f_hi(i) < -slack_hi)
      throw Error(Errc::NotSupersolution, "F(upper) = " + std::to_string(f_hi(i)) + " < 0 at vertex " +
                                              p.graph.label(static_cast<Vertex>(i)));

  const Graph& g = p.graph;
  VertexFunction u = detail::clamp_box(0.5 * (lower + upper), lower, upper);
  double j = energy(p, u);
  double alpha = 1.0;
  constexpr int kMaxSteps = 200000;
  for (int it = 0; it < kMaxSteps; ++it) {
    const VertexFunction grad = residual(p, u);
    if (inf_norm(u - detail::clamp_box(u - grad, lower, upper)) <= 1e-10) break;
    bool moved = false;
    for (alpha = std::min(2.0 * alpha, 1e3); alpha > 1e-18; alpha *= 0.5) {
      const VertexFunction trial = detail::clamp_box(u - alpha * grad, lower, upper);
      const double jt = energy(p, trial);
      const VertexFunction d = trial - u;
      if (jt <= j + 1e-4 * integrate(g, grad.cwiseProduct(d))) {
        u = trial;
        j = jt;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }

  Solution s = newton_solve(p, u, cfg);
  const double box_slack = 1e-9;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (s.u(i) < lower(i) - box_slack * (1.0 + std::abs(lower(i))) ||
        s.u(i) > upper(i) + box_slack * (1.0 + std::abs(upper(i))))
      throw Error(Errc::NoConvergence, "polished minimizer left the box at vertex " + g.label(static_cast<Vertex>(i)));
  }
  return s;
}

/// A constant A = ln(-c / max|h+|) - 1 below the threshold where constants
/// become subsolutions for c < 0; verified before returning.
inline double find_constant_subsolution(const Problem& p) {
  validate_problem(p);
  const double hmax = p.h_plus.cwiseAbs().maxCoeff();
  if (!(p.c < 0.0)) throw Error(Errc::PreconditionFailed, "needs c < 0");
  if (!(hmax > 0.0)) throw Error(Errc::PreconditionFailed, "needs h_plus != 0");
  const double a = std::log(-p.c / hmax) - 1.0;
  const VertexFunction f = residual(p, VertexFunction::Constant(p.h_plus.size(), a));
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (f(i) > 0.0)
      throw Error(Errc::NotSubsolutionAfterAll,
                  "F(A) = " + std::to_string(f(i)) + " > 0 at vertex " + p.graph.label(static_cast<Vertex>(i)));
  return a;
}

using ProblemFamily = std::function<Problem(double)>;

struct BranchPoint {
  double t = 0.0;
  Solution solution;
};

/// Natural-parameter continuation over t in [0, 1]: n_steps uniform steps,
/// each warm-started from the previous solution; a failed step is halved
/// down to 1e-4 before BranchLost.
inline std::vector<BranchPoint> continuation(const ProblemFamily& family, const VertexFunction& u0, int n_steps,
                                             const SolverConfig& cfg = {}) {
  if (n_steps <= 0) throw Error(Errc::PreconditionFailed, "n_steps must be positive");
  constexpr double kMinStep = 1e-4;
  std::vector<BranchPoint> branch;
  try {
    branch.push_back({0.0, newton_solve(family(0.0), u0, cfg)});
  } catch (const Error& e) {
    throw Error(Errc::BranchLost, std::string("no solution at t = 0: ") + e.what());
  }
  const double nominal = 1.0 / n_steps;
  double dt = nominal;
  double t = 0.0;
  while (t < 1.0) {
    const double step = std::min(dt, 1.0 - t);
    const double next = (1.0 - t - step) < 1e-12 ? 1.0 : t + step;
    try {
      Solution s = newton_solve(family(next), branch.back().solution.u, cfg);
      branch.push_back({next, std::move(s)});
      t = next;
      dt = std::min(nominal, 2.0 * dt);
    } catch (const Error& e) {
      if (step * 0.5 < kMinStep)
        throw Error(Errc::BranchLost, "last good t = " + std::to_string(t) + " (" + e.what() + ")");
      dt = step * 0.5;
    }
  }
  return branch;
}

/// Independent root finder for two-vertex problems: sign-change scan of F on
/// a grid_n x grid_n grid over [-radius, radius]^2, each candidate cell
/// refined by quadrisection to width 1e-10. Uses no derivatives.
inline std::vector<VertexFunction> brute_force_2v(const Problem& p, double radius, int grid_n) {
  validate_problem(p);
  if (p.graph.vertex_count() != 2) throw Error(Errc::NotTwoVertex, "graph has " + std::to_string(p.graph.vertex_count()) + " vertices");
  if (grid_n <= 0 || !(radius > 0.0)) throw Error(Errc::PreconditionFailed, "grid_n and radius must be positive");

  const auto eval = [&](double x, double y) {
    VertexFunction u(2);
    u << x, y;
    return residual(p, u);
  };
  struct Box {
    double x0, y0, w;
  };
  const auto straddles = [](double a, double b, double c, double d) {
    return std::min({a, b, c, d}) <= 0.0 && std::max({a, b, c, d}) >= 0.0;
  };
  const auto qualifies = [&](const Box& b) {
    const auto f00 = eval(b.x0, b.y0), f10 = eval(b.x0 + b.w, b.y0);
    const auto f01 = eval(b.x0, b.y0 + b.w), f11 = eval(b.x0 + b.w, b.y0 + b.w);
    return straddles(f00(0), f10(0), f01(0), f11(0)) && straddles(f00(1), f10(1), f01(1), f11(1));
  };

  const double h = 2.0 * radius / grid_n;
  const auto nodes = static_cast<std::size_t>(grid_n) + 1;
  std::vector<double> f1(nodes * nodes), f2(nodes * nodes);
  for (std::size_t i = 0; i < nodes; ++i)
    for (std::size_t j = 0; j < nodes; ++j) {
      const auto f = eval(-radius + static_cast<double>(i) * h, -radius + static_cast<double>(j) * h);
      f1[i * nodes + j] = f(0);
      f2[i * nodes + j] = f(1);
    }

  constexpr double kWidth = 1e-10;
  constexpr std::size_t kFrontierCap = 4096;
  std::vector<VertexFunction> roots;
  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    for (std::size_t j = 0; j + 1 < nodes; ++j) {
      const std::size_t a = i * nodes + j, b = (i + 1) * nodes + j, c = i * nodes + j + 1, d = (i + 1) * nodes + j + 1;
      if (!straddles(f1[a], f1[b], f1[c], f1[d]) || !straddles(f2[a], f2[b], f2[c], f2[d])) continue;
      std::vector<Box> frontier{{-radius + static_cast<double>(i) * h, -radius + static_cast<double>(j) * h, h}};
      while (!frontier.empty() && frontier.front().w > kWidth) {
        std::vector<Box> next;
        for (const Box& bx : frontier) {
          const double hw = 0.5 * bx.w;
          for (int q = 0; q < 4; ++q) {
            const Box child{bx.x0 + (q & 1) * hw, bx.y0 + (q >> 1) * hw, hw};
            if (qualifies(child)) next.push_back(child);
          }
        }
        if (next.size() > kFrontierCap) next.resize(kFrontierCap);
        frontier = std::move(next);
      }
      for (const Box& bx : frontier) {
        VertexFunction u(2);
        u << bx.x0 + 0.5 * bx.w, bx.y0 + 0.5 * bx.w;
        if (inf_norm(residual(p, u)) > 1e-6 * std::max(1.0, residual_scale(p, u))) continue;
        const bool dup = std::any_of(roots.begin(), roots.end(), [&](const VertexFunction& r) { return inf_norm(r - u) <= 1e-7; });
        if (!dup) roots.push_back(u);
      }
    }
  }
  std::sort(roots.begin(), roots.end(), lexicographic_less);
  return roots;
}

}  // namespace sgdeg
