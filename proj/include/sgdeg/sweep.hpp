#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sgdeg/degree.hpp"

namespace sgdeg {

struct SweepRow {
  double c = 0.0;
  std::size_t n_solutions = 0;
  std::optional<int> numeric_degree;
  std::optional<int> formula_degree;
  /// Smallest residual norm among the solutions; nullopt when there are none.
  std::optional<double> min_residual;
  double radius = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Bisection estimate of the lowest solvability threshold on the grid.
  /// An estimator of c*, not its infimum definition.
  std::optional<double> cstar_estimate;
  /// Final bracket: (last c without solutions, first c with solutions).
  std::optional<std::pair<double, double>> cstar_bracket;
};

inline constexpr double kCstarResolution = 1e-4;

inline std::vector<double> linspace(double from, double to, std::size_t steps) {
  std::vector<double> out;
  if (steps == 0) return out;
  if (steps == 1) return {from};
  for (std::size_t i = 0; i < steps; ++i)
    out.push_back(from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1));
  return out;
}

namespace detail {

inline const Problem& as_problem(const Problem& p) { return p; }
inline Problem as_problem(const KWProblem& p) { return to_problem(p); }

inline bool is_both_zero(const Problem& p) { return is_zero(p.h_plus) && is_zero(p.h_minus); }
inline bool is_both_zero(const KWProblem& p) { return is_zero(p.h); }

}  // namespace detail

/// Solution count and degree on a uniform grid of c, followed by bisection
/// (to kCstarResolution) of the lowest grid transition from "no solutions"
/// to "some solutions".
template <class P>
SweepResult sweep_c(const P& base, double from, double to, std::size_t steps, const SolverConfig& cfg,
                    std::uint64_t seed, std::size_t starts = kDefaultStarts) {
  SweepResult out;
  for (double c : linspace(from, to, steps)) {
    P q = base;
    q.c = c;
    SweepRow row;
    row.c = c;
    if (detail::is_both_zero(q)) {
      Enumeration e = enumerate_solutions(detail::as_problem(q), kFirstRadius, starts, cfg, seed);
      row.n_solutions = e.solutions.size();
      row.radius = kFirstRadius;
    } else {
      DegreeReport rep = degree_numeric(q, cfg, seed, starts);
      row.n_solutions = rep.solutions.size();
      row.numeric_degree = rep.numeric_degree;
      row.formula_degree = rep.formula_degree;
      row.radius = rep.radius;
      for (const auto& s : rep.solutions)
        row.min_residual = row.min_residual ? std::min(*row.min_residual, s.residual_inf_norm) : s.residual_inf_norm;
    }
    out.rows.push_back(row);
  }

  for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
    if (out.rows[i].n_solutions != 0 || out.rows[i + 1].n_solutions == 0) continue;
    double lo = out.rows[i].c;
    double hi = out.rows[i + 1].c;
    const double radius = out.rows[i + 1].radius;
    while (std::abs(hi - lo) > kCstarResolution) {
      const double mid = 0.5 * (lo + hi);
      P q = base;
      q.c = mid;
      const bool solvable = !enumerate_solutions(detail::as_problem(q), radius, starts, cfg, seed).solutions.empty();
      (solvable ? hi : lo) = mid;
    }
    out.cstar_estimate = 0.5 * (lo + hi);
    out.cstar_bracket = std::pair{lo, hi};
    break;
  }
  return out;
}

}  // namespace sgdeg
