#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sgdeg/random.hpp"
#include "sgdeg/solver.hpp"

namespace sgdeg {

/// A vertex (when the violated inequality is local) and the two sides of the
/// inequality there.
struct Witness {
  std::optional<Vertex> vertex;
  std::vector<double> values;
  std::string detail;
};

struct CheckOutcome {
  CheckOutcome() = default;
  explicit CheckOutcome(std::string n) : name(std::move(n)) {}

  std::string name;
  bool passed = true;
  std::optional<Witness> witness;
  /// Slack (right side minus left side, before the additive round-off
  /// allowance) of the tightest inequality checked. For the Green identity,
  /// which is an equality, the absolute defect instead.
  double margin = std::numeric_limits<double>::infinity();
};

namespace detail {

inline constexpr double kLocalSlack = 1e-10;
inline constexpr double kGlobalSlack = 1e-9;

// Records one inequality lhs <= rhs (+ allowance) into `out`.
inline void record(CheckOutcome& out, std::optional<Vertex> x, double lhs, double rhs, double allowance,
                   const std::string& detail) {
  const double slack = rhs - lhs;
  out.margin = std::min(out.margin, slack);
  if (slack < -allowance && out.passed) {
    out.passed = false;
    out.witness = Witness{x, {lhs, rhs}, detail};
  }
}

}  // namespace detail

/// A non-constant u attains its maximum at some vertex where Lap u < 0.
inline CheckOutcome check_max_principle(const Graph& g, const VertexFunction& u) {
  CheckOutcome out("max_principle");
  const double top = u.maxCoeff();
  if (top - u.minCoeff() <= 1e-12) return out;
  const VertexFunction lap = laplacian(g, u);
  std::optional<Vertex> best;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const auto ix = static_cast<Eigen::Index>(x);
    if (u(ix) == top && (!best || lap(ix) < lap(static_cast<Eigen::Index>(*best)))) best = x;
  }
  const double at_best = lap(static_cast<Eigen::Index>(*best));
  out.margin = -at_best;
  if (!(at_best < 0.0)) {
    out.passed = false;
    out.witness = Witness{best, {at_best, 0.0}, "Lap u >= 0 at every maximum"};
  }
  return out;
}

/// Lap(u+) >= 1{u > 0} Lap u at every vertex.
inline CheckOutcome check_kato(const Graph& g, const VertexFunction& u) {
  CheckOutcome out("kato");
  const VertexFunction lap = laplacian(g, u);
  const VertexFunction lap_plus = laplacian(g, u.cwiseMax(0.0));
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const auto ix = static_cast<Eigen::Index>(x);
    const double rhs = u(ix) > 0.0 ? lap(ix) : 0.0;
    detail::record(out, x, rhs, lap_plus(ix), detail::kLocalSlack, "Lap(u+) < 1{u>0} Lap u");
  }
  return out;
}

/// With L = max u - u: for every edge x~y,
///   L(y) <= (mu_x / w_xy) ((deg_x / mu_x) L(x) - Lap u(x)),
/// and when max u + min u >= 0, for every x,
///   -Lap u(x) <= (deg_x / mu_x) (2 u(x) + L(x)).
inline CheckOutcome check_harnack(const Graph& g, const VertexFunction& u) {
  CheckOutcome out("harnack");
  const VertexFunction lap = laplacian(g, u);
  const double top = u.maxCoeff();
  const VertexFunction gap = (top - u.array()).matrix();
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const auto ix = static_cast<Eigen::Index>(x);
    const double deg_ratio = g.degree(x) / g.mu(x);
    for (Vertex y = 0; y < g.vertex_count(); ++y) {
      if (!g.adjacent(x, y)) continue;
      const double rhs = g.mu(x) / g.weight(x, y) * (deg_ratio * gap(ix) - lap(ix));
      detail::record(out, x, gap(static_cast<Eigen::Index>(y)), rhs, detail::kLocalSlack,
                     "edge " + g.label(x) + "-" + g.label(y));
    }
  }
  if (top + u.minCoeff() >= 0.0) {
    for (Vertex x = 0; x < g.vertex_count(); ++x) {
      const auto ix = static_cast<Eigen::Index>(x);
      const double rhs = g.degree(x) / g.mu(x) * (2.0 * u(ix) + gap(ix));
      detail::record(out, x, -lap(ix), rhs, detail::kLocalSlack, "vertex bound, max u + min u >= 0");
    }
  }
  return out;
}

/// max u - min u <= chain_factor * B * max Lap u.
inline CheckOutcome check_elliptic(const Graph& g, const VertexFunction& u) {
  if (g.vertex_count() < 2) throw Error(Errc::SingleVertex, "elliptic estimate needs two vertices");
  CheckOutcome out("elliptic");
  const EllipticConstants k = elliptic_constants(g);
  const double osc = u.maxCoeff() - u.minCoeff();
  const double rhs = k.chain_factor * k.B * laplacian(g, u).maxCoeff();
  detail::record(out, std::nullopt, osc, rhs, detail::kGlobalSlack, "oscillation exceeds the elliptic bound");
  return out;
}

/// Integral of Lap u * v equals minus the integral of Gamma(u, v).
inline CheckOutcome check_green(const Graph& g, const VertexFunction& u, const VertexFunction& v) {
  CheckOutcome out("green");
  const double lhs = integrate(g, laplacian(g, u).cwiseProduct(v));
  const double energy = integrate(g, gradient_form(g, u, v));
  const double defect = std::abs(lhs + energy);
  out.margin = defect;
  if (defect > detail::kGlobalSlack * (1.0 + std::abs(energy))) {
    out.passed = false;
    out.witness = Witness{std::nullopt, {lhs, -energy}, "Green identity defect " + std::to_string(defect)};
  }
  return out;
}

/// Checks the hypotheses of the a-priori bound for the given K:
///   (H1) 1/K <= max|h+-| <= K and |c| <= K;  (H2) h+^2 >= h+/K, h-^2 >= -h-/K.
/// The bound's constant is not computable, so the check never fails on
/// ||u||; the margin records ||u||_inf / K as data.
inline CheckOutcome check_solution_bound_heuristic(const Problem& p, const Solution& sol, double k) {
  CheckOutcome out("solution_bound");
  out.margin = inf_norm(sol.u) / k;
  const auto fail = [&](std::optional<Vertex> x, std::vector<double> values, std::string what) {
    if (!out.passed) return;
    out.passed = false;
    out.witness = Witness{x, std::move(values), std::move(what)};
  };
  for (const auto& [h, name] : {std::pair{&p.h_plus, "h_plus"}, std::pair{&p.h_minus, "h_minus"}}) {
    const double m = h->cwiseAbs().maxCoeff();
    if (m < 1.0 / k || m > k) fail(std::nullopt, {m, 1.0 / k, k}, std::string("(H1) max|") + name + "| outside [1/K, K]");
  }
  if (std::abs(p.c) > k) fail(std::nullopt, {std::abs(p.c), k}, "(H1) |c| > K");
  for (Vertex x = 0; x < p.graph.vertex_count(); ++x) {
    const auto ix = static_cast<Eigen::Index>(x);
    const double hp = p.h_plus(ix);
    const double hm = p.h_minus(ix);
    if (hp * hp < hp / k) fail(x, {hp * hp, hp / k}, "(H2) h_plus^2 < h_plus / K");
    if (hm * hm < -hm / k) fail(x, {hm * hm, -hm / k}, "(H2) h_minus^2 < -h_minus / K");
  }
  return out;
}

struct LemmaSuiteOptions {
  std::size_t trials_per_check = 200;
  std::uint64_t seed = 42;
  std::size_t min_vertices = 2;
  std::size_t max_vertices = 10;
};

/// Runs every lemma check on random data and folds the trials of each check
/// into one outcome (passed iff all trials passed, tightest margin, first
/// witness). With `fixed` set, only u and v are random.
inline std::vector<CheckOutcome> run_lemma_suite(const LemmaSuiteOptions& opt, const Graph* fixed = nullptr) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> size(opt.min_vertices, opt.max_vertices);
  const auto next_graph = [&] { return fixed ? *fixed : random_graph(rng, size(rng)); };

  const auto fold = [](CheckOutcome& acc, const CheckOutcome& one) {
    acc.margin = std::min(acc.margin, one.margin);
    if (!one.passed && acc.passed) {
      acc.passed = false;
      acc.witness = one.witness;
    }
  };
  CheckOutcome maxp("max_principle"), kato("kato"), harnack("harnack"), elliptic("elliptic"), green("green");
  green.margin = 0.0;
  for (std::size_t t = 0; t < opt.trials_per_check; ++t) {
    {
      const Graph g = next_graph();
      fold(maxp, check_max_principle(g, random_function(rng, g.vertex_count(), -5.0, 5.0)));
    }
    {
      const Graph g = next_graph();
      fold(kato, check_kato(g, random_function(rng, g.vertex_count(), -5.0, 5.0)));
    }
    {
      const Graph g = next_graph();
      VertexFunction u = random_function(rng, g.vertex_count(), -5.0, 5.0);
      const double s = u.maxCoeff() + u.minCoeff();
      if (s < 0.0) u.array() += -s;
      fold(harnack, check_harnack(g, u));
    }
    {
      const Graph g = next_graph();
      if (g.vertex_count() >= 2) fold(elliptic, check_elliptic(g, random_function(rng, g.vertex_count(), -5.0, 5.0)));
    }
    {
      const Graph g = next_graph();
      const VertexFunction u = random_function(rng, g.vertex_count(), -5.0, 5.0);
      const VertexFunction v = random_function(rng, g.vertex_count(), -5.0, 5.0);
      const CheckOutcome one = check_green(g, u, v);
      green.margin = std::max(green.margin, one.margin);
      if (!one.passed && green.passed) {
        green.passed = false;
        green.witness = one.witness;
      }
    }
  }
  return {maxp, kato, harnack, elliptic, green};
}

}  // namespace sgdeg
