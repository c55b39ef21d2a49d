#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sgdeg/graph.hpp"

namespace sgdeg {

/// Iterates with |u| beyond this are treated as divergent; exp() overflows
/// double precision near 709.78.
inline constexpr double kOverflowGuard = 700.0;

/// One sinh-Gordon instance  -Lap u = h+ e^u + h- e^-u - c.
struct Problem {
  Graph graph;
  VertexFunction h_plus;
  VertexFunction h_minus;
  double c = 0.0;
};

/// Kazdan-Warner instance  -Lap u = h e^u - c. Kept apart from Problem
/// because it has its own degree table.
struct KWProblem {
  Graph graph;
  VertexFunction h;
  double c = 0.0;
};

inline Problem to_problem(const KWProblem& p) {
  return Problem{p.graph, p.h, VertexFunction::Zero(p.h.size()), p.c};
}

inline void validate_problem(const Problem& p) {
  detail::require_match(p.graph, p.h_plus, "h_plus");
  detail::require_match(p.graph, p.h_minus, "h_minus");
  require_finite(p.h_plus, "h_plus");
  require_finite(p.h_minus, "h_minus");
  if (!std::isfinite(p.c)) throw Error(Errc::NonFinite, "c");
}

inline void validate_problem(const KWProblem& p) {
  detail::require_match(p.graph, p.h, "h");
  require_finite(p.h, "h");
  if (!std::isfinite(p.c)) throw Error(Errc::NonFinite, "c");
}

namespace detail {

inline void guard_overflow(const VertexFunction& u) {
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (!(std::abs(u(i)) <= kOverflowGuard))
      throw Error(Errc::Overflow, "|u| exceeds " + std::to_string(kOverflowGuard) + " at vertex " + std::to_string(i));
}

}  // namespace detail

/// F(u) = -Lap u - h+ e^u - h- e^-u + c.
inline VertexFunction residual(const Problem& p, const VertexFunction& u) {
  detail::require_match(p.graph, u, "u");
  detail::guard_overflow(u);
  const Eigen::ArrayXd eu = u.array().exp();
  return (-laplacian(p.graph, u).array() - p.h_plus.array() * eu - p.h_minus.array() / eu + p.c).matrix();
}

/// K(u) = -Lap u - h e^u + c.
inline VertexFunction kw_residual(const KWProblem& p, const VertexFunction& u) {
  return residual(to_problem(p), u);
}

/// dF(u) = -Lap - diag(h+ e^u) + diag(h- e^-u).
inline LinearOperator jacobian(const Problem& p, const VertexFunction& u) {
  detail::require_match(p.graph, u, "u");
  detail::guard_overflow(u);
  LinearOperator j = -laplacian_matrix(p.graph);
  const Eigen::ArrayXd eu = u.array().exp();
  j.diagonal().array() += -p.h_plus.array() * eu + p.h_minus.array() / eu;
  return j;
}

/// Magnitude of the terms entering F(u) at each vertex; used to judge
/// when a residual is at round-off level.
inline double residual_scale(const Problem& p, const VertexFunction& u) {
  const Graph& g = p.graph;
  const Eigen::ArrayXd eu = u.array().exp();
  double scale = 0.0;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const auto ix = static_cast<Eigen::Index>(x);
    double lap = 0.0;
    for (Vertex y = 0; y < g.vertex_count(); ++y)
      if (g.adjacent(x, y)) lap += g.weight(x, y) * (std::abs(u(static_cast<Eigen::Index>(y))) + std::abs(u(ix)));
    const double t = lap / g.mu(x) + std::abs(p.h_plus(ix)) * eu(ix) + std::abs(p.h_minus(ix)) / eu(ix) + std::abs(p.c);
    scale = std::max(scale, t);
  }
  return scale;
}

/// J(u) = integral of ( |grad u|^2 / 2 - h+ e^u + h- e^-u + c u ).
/// Its directional derivative along xi is the integral of F(u) xi.
inline double energy(const Problem& p, const VertexFunction& u) {
  detail::require_match(p.graph, u, "u");
  detail::guard_overflow(u);
  const Eigen::ArrayXd eu = u.array().exp();
  const VertexFunction density = (0.5 * grad_norm_sq(p.graph, u).array() - p.h_plus.array() * eu +
                                  p.h_minus.array() / eu + p.c * u.array())
                                     .matrix();
  return integrate(p.graph, density);
}

enum class SignTag {
  V0_matched,
  mismatched,
  hplus_nonpos_hminus_nonneg,
  hplus_changes_hminus_nonneg,
  hplus_nonpos_hminus_changes,
  zero_function_present,
};

inline const char* to_string(SignTag t) {
  switch (t) {
    case SignTag::V0_matched: return "V0_matched";
    case SignTag::mismatched: return "mismatched";
    case SignTag::hplus_nonpos_hminus_nonneg: return "hplus_nonpos_hminus_nonneg";
    case SignTag::hplus_changes_hminus_nonneg: return "hplus_changes_hminus_nonneg";
    case SignTag::hplus_nonpos_hminus_changes: return "hplus_nonpos_hminus_changes";
    case SignTag::zero_function_present: return "zero_function_present";
  }
  return "unknown";
}

struct SignClass {
  SignTag tag = SignTag::zero_function_present;
  /// Populated only for V0_matched.
  VertexSet v0;
};

/// Vertices where h+ > 0.
inline VertexSet positive_set(const VertexFunction& h) {
  VertexSet s;
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (h(i) > 0.0) s.push_back(static_cast<Vertex>(i));
  return s;
}

/// Vertices where h- < 0.
inline VertexSet negative_set(const VertexFunction& h) {
  VertexSet s;
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (h(i) < 0.0) s.push_back(static_cast<Vertex>(i));
  return s;
}

inline bool is_zero(const VertexFunction& h) { return (h.array() == 0.0).all(); }

/// Routes (h+, h-) to its degree case by exact sign comparisons.
inline SignClass classify_signs(const Problem& p) {
  const VertexFunction& hp = p.h_plus;
  const VertexFunction& hm = p.h_minus;
  if (is_zero(hp) || is_zero(hm)) return {SignTag::zero_function_present, {}};
  const bool hp_nonpos = (hp.array() <= 0.0).all();
  const bool hm_nonneg = (hm.array() >= 0.0).all();
  if (hp_nonpos && hm_nonneg) return {SignTag::hplus_nonpos_hminus_nonneg, {}};
  if (hm_nonneg) return {SignTag::hplus_changes_hminus_nonneg, {}};
  if (hp_nonpos) return {SignTag::hplus_nonpos_hminus_changes, {}};
  VertexSet vp = positive_set(hp);
  if (vp == negative_set(hm)) return {SignTag::V0_matched, std::move(vp)};
  return {SignTag::mismatched, {}};
}

}  // namespace sgdeg
