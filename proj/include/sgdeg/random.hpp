#pragma once

#include <cstdint>
#include <random>

#include "sgdeg/graph.hpp"

namespace sgdeg {

/// Random connected graph: a random spanning tree plus each remaining pair
/// with probability `extra_edge_p`; weights and measures uniform in
/// [lo, hi].
inline Graph random_graph(std::mt19937_64& rng, std::size_t n, double lo = 0.1, double hi = 10.0,
                          double extra_edge_p = 0.3) {
  std::uniform_real_distribution<double> value(lo, hi);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Graph g(n);
  VertexFunction mu(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < mu.size(); ++i) mu(i) = value(rng);
  g = Graph(g.labels(), mu, g.weights());
  for (std::size_t x = 1; x < n; ++x) {
    std::uniform_int_distribution<std::size_t> parent(0, x - 1);
    g.set_edge(x, parent(rng), value(rng));
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (g.weight(x, y) == 0.0 && coin(rng) < extra_edge_p) g.set_edge(x, y, value(rng));
  return g;
}

inline VertexFunction random_function(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> value(lo, hi);
  VertexFunction f(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = value(rng);
  return f;
}

/// Integer entries drawn uniformly from [lo, hi].
inline VertexFunction random_integer_function(std::mt19937_64& rng, std::size_t n, int lo, int hi) {
  std::uniform_int_distribution<int> value(lo, hi);
  VertexFunction f(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = value(rng);
  return f;
}

}  // namespace sgdeg
