#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sgdeg/solver.hpp"

namespace sgdeg {

/// Closed-form degree of the sinh-Gordon residual map.
///
///  - h+ <= 0, h- >= 0:       1 if min h+ < 0 and max h- > 0; 1 if c < 0 and
///                            h- == 0; 1 if c > 0 and h+ == 0; else 0.
///  - max h+ > 0, h- >= 0:    -1 if h- == 0 and c > 0; -1 if h- == 0, c == 0
///                            and the integral of h+ is negative; else 0.
///  - h+ <= 0, min h- < 0:    mirror image of the previous row under u -> -u.
///  - max h+ > 0, min h- < 0: (-1)^#V0 if {h+ > 0} == {h- < 0} == V0, else 0.
///
/// Throws BothZero when h+ == h- == 0 (the degree is undefined there).
inline int degree_formula(const Problem& p) {
  validate_problem(p);
  const VertexFunction& hp = p.h_plus;
  const VertexFunction& hm = p.h_minus;
  const bool hp_zero = is_zero(hp);
  const bool hm_zero = is_zero(hm);
  if (hp_zero && hm_zero) throw Error(Errc::BothZero, "h_plus and h_minus both vanish identically");
  const bool hp_nonpos = (hp.array() <= 0.0).all();
  const bool hm_nonneg = (hm.array() >= 0.0).all();

  if (hp_nonpos && hm_nonneg) {
    if (hp.minCoeff() < 0.0 && hm.maxCoeff() > 0.0) return 1;
    if (p.c < 0.0 && hm_zero) return 1;
    if (p.c > 0.0 && hp_zero) return 1;
    return 0;
  }
  if (hm_nonneg) {
    if (hm_zero && p.c > 0.0) return -1;
    if (hm_zero && p.c == 0.0 && integrate(p.graph, hp) < 0.0) return -1;
    return 0;
  }
  if (hp_nonpos) {
    if (hp_zero && p.c < 0.0) return -1;
    if (hp_zero && p.c == 0.0 && integrate(p.graph, hm) > 0.0) return -1;
    return 0;
  }
  const VertexSet v0 = positive_set(hp);
  if (v0 != negative_set(hm)) return 0;
  return v0.size() % 2 == 0 ? 1 : -1;
}

/// Closed-form degree of the Kazdan-Warner map K(u) = -Lap u - h e^u + c:
/// -1 if c > 0 and max h > 0; -1 if c == 0 and mean(h) < 0 < max h;
/// +1 if c < 0 and max h <= 0 (h is nonzero, so min h < 0); else 0.
inline int kw_degree_formula(const KWProblem& p) {
  validate_problem(p);
  if (is_zero(p.h)) throw Error(Errc::ZeroH, "h vanishes identically");
  const double hmax = p.h.maxCoeff();
  if (p.c > 0.0 && hmax > 0.0) return -1;
  if (p.c == 0.0 && hmax > 0.0 && integrate(p.graph, p.h) < 0.0) return -1;
  if (p.c < 0.0 && hmax <= 0.0) return 1;
  return 0;
}

enum class Agreement { match, mismatch, formula_only, numeric_only };

inline const char* to_string(Agreement a) {
  switch (a) {
    case Agreement::match: return "match";
    case Agreement::mismatch: return "mismatch";
    case Agreement::formula_only: return "formula_only";
    case Agreement::numeric_only: return "numeric_only";
  }
  return "unknown";
}

struct DegreeReport {
  std::optional<int> formula_degree;
  /// nullopt when indeterminate.
  std::optional<int> numeric_degree;
  std::vector<Solution> solutions;
  double radius = 0.0;
  bool radius_stable = false;
  Agreement agreement = Agreement::formula_only;
  std::vector<std::string> notes;

  // Solver metadata.
  std::uint64_t seed = 0;
  std::size_t starts = 0;
  std::size_t failures = 0;
  /// The c actually enumerated (differs from the input after a Morse
  /// perturbation).
  double c_enumerated = 0.0;
};

struct RadiusSelection {
  double radius = 0.0;
  bool stable = false;
  /// Accumulated distinct solutions with norm <= radius.
  std::vector<Solution> solutions;
  std::size_t starts = 0;
  std::size_t failures = 0;
  /// Solution counts at each radius tried, in order 8, 16, ...
  std::vector<std::size_t> counts;
};

inline constexpr double kFirstRadius = 8.0;
inline constexpr double kLastRadius = 128.0;
inline constexpr std::size_t kDefaultStarts = 200;

namespace detail {

inline bool same_solution_set(const std::vector<Solution>& a, const std::vector<Solution>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& s : a) {
    const bool found = std::any_of(b.begin(), b.end(), [&](const Solution& t) { return same_solution(s, t, tol); });
    if (!found) return false;
  }
  return true;
}

}  // namespace detail

/// Empirical stand-in for the a-priori bound: enumerate at R = 8, 16, ...,
/// 128, accumulating every root found so far, including roots that Newton
/// reached outside the current ball. Stable at the first R whose set equals
/// the set at R/2 and where every root ever found satisfies ||u||_inf <= R/2.
inline RadiusSelection select_radius(const Problem& p, const SolverConfig& cfg, std::uint64_t seed,
                                     std::size_t starts = kDefaultStarts) {
  RadiusSelection out;
  std::vector<Solution> found;
  std::vector<Solution> prev;
  bool have_prev = false;
  for (double r = kFirstRadius; r <= kLastRadius; r *= 2.0) {
    Enumeration e = enumerate_solutions(p, r, starts, cfg, seed);
    out.starts += e.starts;
    out.failures += e.failures;
    for (auto& s : e.solutions) insert_distinct(found, std::move(s), cfg.dedup_tol);
    for (auto& s : e.outside) insert_distinct(found, std::move(s), cfg.dedup_tol);
    std::vector<Solution> cur;
    for (const auto& s : found)
      if (inf_norm(s.u) <= r) cur.push_back(s);
    sort_solutions(cur);
    out.counts.push_back(cur.size());
    out.radius = r;
    out.solutions = cur;
    const bool interior =
        std::all_of(found.begin(), found.end(), [&](const Solution& s) { return inf_norm(s.u) <= 0.5 * r; });
    if (have_prev && interior && detail::same_solution_set(prev, cur, cfg.dedup_tol)) {
      out.stable = true;
      return out;
    }
    prev = std::move(cur);
    have_prev = true;
  }
  return out;
}

namespace detail {

// Perturbations of c tried in turn when a solution is degenerate. A root
// that is degenerate at c typically has |det| of order (shift)^2 nearby,
// so the first rung alone rarely clears morse_tol.
inline constexpr double kMorseShifts[] = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2};

inline bool any_degenerate(const std::vector<Solution>& s) {
  return std::any_of(s.begin(), s.end(), [](const Solution& x) { return x.det_sign == 0; });
}

inline int sign_sum(const std::vector<Solution>& s) {
  int d = 0;
  for (const auto& x : s) d += x.det_sign;
  return d;
}

inline DegreeReport degree_numeric_impl(const Problem& p, const std::function<int(double)>& formula_at,
                                        const SolverConfig& cfg, std::uint64_t seed, std::size_t starts) {
  DegreeReport rep;
  rep.seed = seed;
  rep.c_enumerated = p.c;
  rep.formula_degree = formula_at(p.c);

  RadiusSelection rs = select_radius(p, cfg, seed, starts);
  rep.radius = rs.radius;
  rep.radius_stable = rs.stable;
  rep.solutions = rs.solutions;
  rep.starts = rs.starts;
  rep.failures = rs.failures;

  if (!rs.stable) {
    rep.notes.push_back("RadiusUnstable: solution set did not stabilise up to R = " + std::to_string(kLastRadius) +
                        "; partial sign sum " + std::to_string(sign_sum(rs.solutions)));
    rep.agreement = Agreement::formula_only;
    return rep;
  }

  if (any_degenerate(rep.solutions)) {
    const int f0 = formula_at(p.c);
    const bool boundary = p.c == 0.0 && (formula_at(kMorseShifts[0]) != f0 || formula_at(-kMorseShifts[0]) != f0);
    if (boundary) {
      rep.notes.push_back("degenerate solution at c = 0, which is a boundary of the degree table; not perturbed");
      rep.agreement = Agreement::formula_only;
      return rep;
    }
    // Smallest shift first; a shift that changes the table value is skipped.
    bool resolved = false;
    for (const double size : kMorseShifts) {
      for (const double shift : {size, -size}) {
        if (formula_at(p.c + shift) != f0) continue;
        Problem q = p;
        q.c = p.c + shift;
        Enumeration e = enumerate_solutions(q, rep.radius, starts, cfg, seed);
        rep.starts += e.starts;
        rep.failures += e.failures;
        if (!any_degenerate(e.solutions)) {
          rep.solutions = std::move(e.solutions);
          rep.c_enumerated = q.c;
          std::ostringstream note;
          note << "Morse perturbation: c shifted by " << shift;
          rep.notes.push_back(note.str());
          resolved = true;
          break;
        }
      }
      if (resolved) break;
    }
    if (!resolved) {
      rep.notes.push_back("degenerate solution persists after Morse perturbation of c");
      rep.agreement = Agreement::formula_only;
      return rep;
    }
  }

  rep.numeric_degree = sign_sum(rep.solutions);
  rep.agreement = *rep.numeric_degree == *rep.formula_degree ? Agreement::match : Agreement::mismatch;
  return rep;
}

}  // namespace detail

/// Degree as the sum of sgn det dF over the enumerated solutions, with
/// agreement against degree_formula. Throws BothZero.
inline DegreeReport degree_numeric(const Problem& p, const SolverConfig& cfg = {}, std::uint64_t seed = 42,
                                   std::size_t starts = kDefaultStarts) {
  degree_formula(p);
  const auto formula_at = [&p](double c) {
    Problem q = p;
    q.c = c;
    return degree_formula(q);
  };
  DegreeReport rep = detail::degree_numeric_impl(p, formula_at, cfg, seed, starts);
  const SignClass sc = classify_signs(p);
  if (sc.tag == SignTag::hplus_nonpos_hminus_nonneg)
    rep.notes.push_back("h+ <= 0, h- >= 0 routed to the first-case table; the matched-set formula with empty V0 "
                        "would also give +1");
  return rep;
}

/// Kazdan-Warner variant: enumerates K (identical to F with h- == 0) and
/// compares against kw_degree_formula. Throws ZeroH.
inline DegreeReport degree_numeric(const KWProblem& p, const SolverConfig& cfg = {}, std::uint64_t seed = 42,
                                   std::size_t starts = kDefaultStarts) {
  kw_degree_formula(p);
  const auto formula_at = [&p](double c) {
    KWProblem q = p;
    q.c = c;
    return kw_degree_formula(q);
  };
  return detail::degree_numeric_impl(to_problem(p), formula_at, cfg, seed, starts);
}

struct V0Decomposition {
  VertexSet v0;
  VertexSet complement;
};

inline V0Decomposition decompose(const Graph& g, const VertexSet& v0) {
  if (v0.empty()) throw Error(Errc::EmptyV0, "vertex subset is empty");
  V0Decomposition d;
  std::vector<bool> in(g.vertex_count(), false);
  for (Vertex x : v0) {
    if (x >= g.vertex_count()) throw Error(Errc::DimensionMismatch, "vertex index out of range");
    in[x] = true;
  }
  for (Vertex x = 0; x < g.vertex_count(); ++x) (in[x] ? d.v0 : d.complement).push_back(x);
  return d;
}

/// V0 = {h+ > 0} = {h- < 0} for a matched problem; nullopt otherwise.
inline std::optional<V0Decomposition> v0_decomposition(const Problem& p) {
  const SignClass sc = classify_signs(p);
  if (sc.tag != SignTag::V0_matched) return std::nullopt;
  return decompose(p.graph, sc.v0);
}

/// Solves Lap u = 0 off V0, u = phi on V0. `phi` is indexed like `v0`.
inline VertexFunction harmonic_extension(const Graph& g, const VertexSet& v0, const VertexFunction& phi) {
  const V0Decomposition d = decompose(g, v0);
  if (static_cast<std::size_t>(phi.size()) != v0.size())
    throw Error(Errc::DimensionMismatch, "phi must have one value per vertex of V0");
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  LinearOperator a = laplacian_matrix(g);
  VertexFunction b = VertexFunction::Zero(n);
  for (std::size_t k = 0; k < v0.size(); ++k) {
    const auto x = static_cast<Eigen::Index>(v0[k]);
    a.row(x).setZero();
    a(x, x) = 1.0;
    b(x) = phi(static_cast<Eigen::Index>(k));
  }
  auto u = solve_dense(a, b);
  if (!u) throw Error(Errc::SingularSystem, "boundary value problem is singular");
  return *u;
}

/// Matrix of phi -> (Lap (P phi)) restricted to V0, in the order of the
/// sorted V0; P is the harmonic extension. Equals the Schur complement of
/// the Laplacian matrix onto V0.
inline LinearOperator schur_operator(const Graph& g, const VertexSet& v0) {
  const V0Decomposition d = decompose(g, v0);
  const LinearOperator m = laplacian_matrix(g);
  const auto k = static_cast<Eigen::Index>(d.v0.size());
  const auto r = static_cast<Eigen::Index>(d.complement.size());
  LinearOperator m00(k, k), m0i(k, r), mi0(r, k), mii(r, r);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) m00(i, j) = m(static_cast<Eigen::Index>(d.v0[i]), static_cast<Eigen::Index>(d.v0[j]));
    for (Eigen::Index j = 0; j < r; ++j) m0i(i, j) = m(static_cast<Eigen::Index>(d.v0[i]), static_cast<Eigen::Index>(d.complement[j]));
  }
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) mi0(i, j) = m(static_cast<Eigen::Index>(d.complement[i]), static_cast<Eigen::Index>(d.v0[j]));
    for (Eigen::Index j = 0; j < r; ++j) mii(i, j) = m(static_cast<Eigen::Index>(d.complement[i]), static_cast<Eigen::Index>(d.complement[j]));
  }
  if (r == 0) return m00;
  Eigen::FullPivLU<LinearOperator> lu(mii);
  if (!lu.isInvertible()) throw Error(Errc::SingularSystem, "interior block of the Laplacian is singular");
  return m00 - m0i * lu.solve(mi0);
}

}  // namespace sgdeg
