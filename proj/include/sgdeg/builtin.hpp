#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "sgdeg/degree.hpp"

namespace sgdeg {

/// One line of a built-in example's pass/fail table.
struct ExampleRow {
  std::string check;
  std::string expected;
  std::string observed;
  bool passed = false;
};

inline const std::vector<std::string>& builtin_example_names() {
  static const std::vector<std::string> names{"case1", "case2", "case3", "case4", "kw-appendix"};
  return names;
}

namespace detail {

inline VertexFunction pair(double a, double b) {
  VertexFunction f(2);
  f << a, b;
  return f;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string fmt(const VertexFunction& u) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < u.size(); ++i) s += (i ? ", " : "") + fmt(u(i));
  return s + ")";
}

inline std::string fmt(const std::optional<int>& d) { return d ? std::to_string(*d) : "indeterminate"; }

inline void degree_rows(std::vector<ExampleRow>& rows, const DegreeReport& r, int expected) {
  rows.push_back({"formula degree", std::to_string(expected), fmt(r.formula_degree),
                  r.formula_degree && *r.formula_degree == expected});
  rows.push_back({"numeric degree", std::to_string(expected), fmt(r.numeric_degree),
                  r.numeric_degree && *r.numeric_degree == expected});
}

// Closed-form root against Newton from 0 and against the grid oracle.
inline void closed_form_rows(std::vector<ExampleRow>& rows, const Problem& p, const VertexFunction& exact,
                             const SolverConfig& cfg) {
  try {
    const Solution s = newton_solve(p, VertexFunction::Zero(2), cfg);
    rows.push_back({"Newton from 0 vs closed form (1e-8)", fmt(exact), fmt(s.u), inf_norm(s.u - exact) <= 1e-8});
  } catch (const Error& e) {
    rows.push_back({"Newton from 0 vs closed form (1e-8)", fmt(exact), e.what(), false});
  }
  const double radius = std::max(8.0, 2.0 * inf_norm(exact));
  const auto roots = brute_force_2v(p, radius, 400);
  const bool one = roots.size() == 1 && inf_norm(roots[0] - exact) <= 1e-8;
  rows.push_back({"grid oracle: exactly one root at the closed form", "1 root", std::to_string(roots.size()) + " root(s)",
                  one});
}

inline void nonexistence_rows(std::vector<ExampleRow>& rows, const Problem& p, const SolverConfig& cfg,
                              std::uint64_t seed, std::size_t starts) {
  const RadiusSelection rs = select_radius(p, cfg, seed, starts);
  rows.push_back({"multistart: no roots (stable radius)", "0", std::to_string(rs.solutions.size()) + " at R=" + fmt(rs.radius),
                  rs.stable && rs.solutions.empty()});
  const auto roots = brute_force_2v(p, 8.0, 600);
  rows.push_back({"grid oracle: no roots in [-8, 8]^2", "0", std::to_string(roots.size()), roots.empty()});
}

}  // namespace detail

/// Builds one of the two-vertex examples (or the Kazdan-Warner table
/// instances) at the given c and cross-checks it against its closed form.
/// Throws UnknownExample.
inline std::vector<ExampleRow> run_builtin_example(const std::string& name, double c, const SolverConfig& cfg = {},
                                                   std::uint64_t seed = 42, std::size_t starts = kDefaultStarts) {
  using detail::pair;
  const Graph g = two_vertex_graph();
  std::vector<ExampleRow> rows;
  if (name == "case1") {
    const Problem p{g, pair(1, 0), pair(-1, 0), c};
    const double x = std::log(c + std::sqrt(c * c + 1.0));
    detail::closed_form_rows(rows, p, pair(x, x - c), cfg);
    detail::degree_rows(rows, degree_numeric(p, cfg, seed, starts), -1);
  } else if (name == "case2") {
    const Problem p{g, pair(1, 0), pair(0, -1), c};
    detail::nonexistence_rows(rows, p, cfg, seed, starts);
    detail::degree_rows(rows, degree_numeric(p, cfg, seed, starts), 0);
  } else if (name == "case3") {
    const Problem p{g, pair(1, 1), pair(-1, 0), c};
    // Roots need c > 0; at larger c they come in pairs of opposite sign.
    if (c <= 0.0) detail::nonexistence_rows(rows, p, cfg, seed, starts);
    detail::degree_rows(rows, degree_numeric(p, cfg, seed, starts), 0);
  } else if (name == "case4") {
    const Problem p{g, pair(1, 1), pair(-1, -1), c};
    const double s = std::log(c / 2.0 + std::sqrt(c * c / 4.0 + 1.0));
    detail::closed_form_rows(rows, p, pair(s, s), cfg);
    detail::degree_rows(rows, degree_numeric(p, cfg, seed, starts), 1);
  } else if (name == "kw-appendix") {
    struct Row {
      const char* label;
      VertexFunction h;
      double c;
      int expected;
    };
    const std::vector<Row> table{
        {"c > 0, max h > 0", pair(1, -1), 1.0, -1},
        {"c = 0, mean h < 0 < max h", pair(1, -2), 0.0, -1},
        {"c < 0, h <= 0 non-constant", pair(-1, -2), -1.0, 1},
        {"c < 0, h constant negative", pair(-1, -1), -1.0, 1},
        {"c > 0, max h <= 0", pair(-1, -2), 1.0, 0},
        {"c = 0, otherwise", pair(2, -1), 0.0, 0},
        {"c < 0, max h > 0", pair(1, -2), -1.0, 0},
    };
    for (const Row& r : table) {
      const DegreeReport rep = degree_numeric(KWProblem{g, r.h, r.c}, cfg, seed, starts);
      const bool ok = rep.formula_degree == r.expected && rep.numeric_degree == r.expected;
      rows.push_back({std::string(r.label) + ", h=" + detail::fmt(r.h) + ", c=" + detail::fmt(r.c),
                      std::to_string(r.expected),
                      "formula " + detail::fmt(rep.formula_degree) + ", numeric " + detail::fmt(rep.numeric_degree), ok});
    }
  } else {
    throw Error(Errc::UnknownExample, "unknown example \"" + name + "\"");
  }
  return rows;
}

}  // namespace sgdeg
