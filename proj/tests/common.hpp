#pragma once

#include <initializer_list>

#include <gtest/gtest.h>

#include "sgdeg/sgdeg.hpp"

namespace sgdeg::test {

inline VertexFunction vec(std::initializer_list<double> v) {
  VertexFunction f(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) f(i++) = x;
  return f;
}

// The four two-vertex instances on the unit graph.
inline Problem case1(double c) { return {two_vertex_graph(), vec({1, 0}), vec({-1, 0}), c}; }
inline Problem case2(double c) { return {two_vertex_graph(), vec({1, 0}), vec({0, -1}), c}; }
inline Problem case3(double c) { return {two_vertex_graph(), vec({1, 1}), vec({-1, 0}), c}; }
inline Problem case4(double c) { return {two_vertex_graph(), vec({1, 1}), vec({-1, -1}), c}; }

inline VertexFunction case1_solution(double c) {
  const double x = std::log(c + std::sqrt(c * c + 1.0));
  return vec({x, x - c});
}

inline VertexFunction case4_solution(double c) {
  const double s = std::log(c / 2.0 + std::sqrt(c * c / 4.0 + 1.0));
  return vec({s, s});
}

// -Lap u = -e^u + e^-u: the only solution is u == 0.
inline Problem canonical(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  return {g, VertexFunction::Constant(n, -1.0), VertexFunction::Constant(n, 1.0), 0.0};
}

#define EXPECT_ERRC(stmt, errc)            \
  do {                                     \
    try {                                  \
      stmt;                                \
      ADD_FAILURE() << "no exception";     \
    } catch (const ::sgdeg::Error& e) {    \
      EXPECT_EQ(e.code(), errc) << e.what(); \
    }                                      \
  } while (0)

}  // namespace sgdeg::test
