#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sgdeg/error.hpp"

namespace sgdeg {

/// One real value per vertex, aligned with the graph's vertex order.
using VertexFunction = Eigen::VectorXd;
/// Dense matrix acting on vertex functions.
using LinearOperator = Eigen::MatrixXd;
using Vertex = std::size_t;
using VertexSet = std::vector<Vertex>;

/// Finite weighted graph with a positive vertex measure.
///
/// The weight matrix is dense and symmetric; a zero entry means "not
/// adjacent". Construction does not validate: call validate_graph (or build
/// through from_edges, which does) before using the calculus below.
class Graph {
 public:
  Graph() = default;

  Graph(std::vector<std::string> labels, VertexFunction mu, Eigen::MatrixXd weights)
      : labels_(std::move(labels)), mu_(std::move(mu)), weights_(std::move(weights)) {}

  /// Unit measure with no edges and labels x1..xn.
  explicit Graph(std::size_t n)
      : mu_(VertexFunction::Ones(static_cast<Eigen::Index>(n))),
        weights_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))) {
    for (std::size_t i = 0; i < n; ++i) labels_.push_back("x" + std::to_string(i + 1));
  }

  struct EdgeSpec {
    std::string u;
    std::string v;
    double w;
  };

  /// Builds from labelled vertices and an edge list, one entry per
  /// unordered pair, then validates.
  static Graph from_edges(const std::vector<std::pair<std::string, double>>& vertices,
                          const std::vector<EdgeSpec>& edges);

  std::size_t vertex_count() const { return static_cast<std::size_t>(mu_.size()); }
  const VertexFunction& mu() const { return mu_; }
  double mu(Vertex x) const { return mu_(static_cast<Eigen::Index>(x)); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double weight(Vertex x, Vertex y) const {
    return weights_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
  }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Vertex x) const { return labels_.at(x); }

  std::optional<Vertex> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }

  bool adjacent(Vertex x, Vertex y) const { return x != y && weight(x, y) > 0.0; }

  /// Weighted degree: sum over neighbours of the edge weights.
  double degree(Vertex x) const { return weights_.row(static_cast<Eigen::Index>(x)).sum(); }

  void set_edge(Vertex x, Vertex y, double w) {
    weights_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = w;
    weights_(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = w;
  }

  /// Returns a copy with every weight and measure multiplied by `factor`.
  Graph scaled(double factor) const { return Graph(labels_, mu_ * factor, weights_ * factor); }

 private:
  std::vector<std::string> labels_;
  VertexFunction mu_;
  Eigen::MatrixXd weights_;
};

/// Two vertices joined by one edge, unit weight and measure.
inline Graph two_vertex_graph(double w = 1.0, double mu1 = 1.0, double mu2 = 1.0) {
  Graph g(2);
  Eigen::VectorXd mu(2);
  mu << mu1, mu2;
  g = Graph(g.labels(), mu, g.weights());
  g.set_edge(0, 1, w);
  return g;
}

/// Path x1 - x2 - ... - xn with unit weights and measure.
inline Graph path_graph(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.set_edge(i, i + 1, 1.0);
  return g;
}

namespace detail {

inline std::string edge_name(const Graph& g, Vertex x, Vertex y) {
  return g.label(x) + "-" + g.label(y);
}

inline void require_match(const Graph& g, const VertexFunction& f, const char* what) {
  if (static_cast<std::size_t>(f.size()) != g.vertex_count())
    throw Error(Errc::DimensionMismatch, std::string(what) + " has " + std::to_string(f.size()) +
                                             " entries, graph has " +
                                             std::to_string(g.vertex_count()) + " vertices");
}

}  // namespace detail

/// Checks every structural invariant; throws Error naming the offending
/// vertex or edge.
inline void validate_graph(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw Error(Errc::Disconnected, "graph has no vertices");
  if (g.labels().size() != n || static_cast<std::size_t>(g.weights().rows()) != n ||
      static_cast<std::size_t>(g.weights().cols()) != n)
    throw Error(Errc::DimensionMismatch, "labels, measure and weights disagree on vertex count");

  for (Vertex x = 0; x < n; ++x) {
    if (!std::isfinite(g.mu(x)) || !(g.mu(x) > 0.0))
      throw Error(Errc::NonpositiveMeasure, "vertex " + g.label(x) + " has measure " + std::to_string(g.mu(x)));
  }
  for (Vertex x = 0; x < n; ++x) {
    if (g.weight(x, x) != 0.0) throw Error(Errc::SelfLoop, "vertex " + g.label(x));
    for (Vertex y = x + 1; y < n; ++y) {
      const double a = g.weight(x, y);
      const double b = g.weight(y, x);
      if (!std::isfinite(a) || !std::isfinite(b))
        throw Error(Errc::NonFinite, "edge " + detail::edge_name(g, x, y));
      if (a != b) throw Error(Errc::AsymmetricWeights, "edge " + detail::edge_name(g, x, y));
      if (a < 0.0) throw Error(Errc::AsymmetricWeights, "negative weight on edge " + detail::edge_name(g, x, y));
    }
  }

  std::vector<bool> seen(n, false);
  std::deque<Vertex> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    for (Vertex y = 0; y < n; ++y) {
      if (!seen[y] && g.adjacent(x, y)) {
        seen[y] = true;
        queue.push_back(y);
      }
    }
  }
  for (Vertex x = 0; x < n; ++x)
    if (!seen[x]) throw Error(Errc::Disconnected, "vertex " + g.label(x) + " unreachable from " + g.label(0));
}

inline Graph Graph::from_edges(const std::vector<std::pair<std::string, double>>& vertices,
                               const std::vector<EdgeSpec>& edges) {
  std::vector<std::string> labels;
  VertexFunction mu(static_cast<Eigen::Index>(vertices.size()));
  std::map<std::string, Vertex> index;
  for (const auto& [id, m] : vertices) {
    if (!index.emplace(id, labels.size()).second)
      throw Error(Errc::ParseError, "duplicate vertex id " + id);
    mu(static_cast<Eigen::Index>(labels.size())) = m;
    labels.push_back(id);
  }
  const auto n = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges) {
    const auto iu = index.find(e.u);
    const auto iv = index.find(e.v);
    if (iu == index.end() || iv == index.end())
      throw Error(Errc::ParseError, "edge " + e.u + "-" + e.v + " references an unknown vertex");
    if (iu->second == iv->second) throw Error(Errc::SelfLoop, "vertex " + e.u);
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw Error(Errc::ParseError, "edge " + e.u + "-" + e.v + " must have positive finite weight");
    const auto a = static_cast<Eigen::Index>(iu->second);
    const auto b = static_cast<Eigen::Index>(iv->second);
    if (w(a, b) != 0.0 && w(a, b) != e.w)
      throw Error(Errc::AsymmetricWeights, "edge " + e.u + "-" + e.v + " listed with weights " + std::to_string(w(a, b)) +
                                               " and " + std::to_string(e.w));
    if (w(a, b) != 0.0) throw Error(Errc::ParseError, "duplicate edge " + e.u + "-" + e.v);
    w(a, b) = e.w;
    w(b, a) = e.w;
  }
  Graph g(std::move(labels), std::move(mu), std::move(w));
  validate_graph(g);
  return g;
}

/// Dense matrix M with (M u)(x) = (1/mu_x) sum_y w_xy (u(y) - u(x)).
inline LinearOperator laplacian_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  LinearOperator m(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const double inv_mu = 1.0 / g.mu()(x);
    double diag = 0.0;
    for (Eigen::Index y = 0; y < n; ++y) {
      if (y == x) continue;
      m(x, y) = g.weights()(x, y) * inv_mu;
      diag += g.weights()(x, y);
    }
    m(x, x) = -diag * inv_mu;
  }
  return m;
}

/// Graph Laplacian evaluated vertex by vertex.
inline VertexFunction laplacian(const Graph& g, const VertexFunction& u) {
  detail::require_match(g, u, "u");
  const std::size_t n = g.vertex_count();
  VertexFunction out(static_cast<Eigen::Index>(n));
  for (Vertex x = 0; x < n; ++x) {
    double acc = 0.0;
    for (Vertex y = 0; y < n; ++y)
      if (g.adjacent(x, y)) acc += g.weight(x, y) * (u(static_cast<Eigen::Index>(y)) - u(static_cast<Eigen::Index>(x)));
    out(static_cast<Eigen::Index>(x)) = acc / g.mu(x);
  }
  return out;
}

/// Sum of f(x) mu_x.
inline double integrate(const Graph& g, const VertexFunction& f) {
  detail::require_match(g, f, "f");
  return f.dot(g.mu());
}

/// Gamma(u,v)(x) = (1/(2 mu_x)) sum_y w_xy (u(y)-u(x)) (v(y)-v(x)).
inline VertexFunction gradient_form(const Graph& g, const VertexFunction& u, const VertexFunction& v) {
  detail::require_match(g, u, "u");
  detail::require_match(g, v, "v");
  const std::size_t n = g.vertex_count();
  VertexFunction out(static_cast<Eigen::Index>(n));
  for (Vertex x = 0; x < n; ++x) {
    const auto ix = static_cast<Eigen::Index>(x);
    double acc = 0.0;
    for (Vertex y = 0; y < n; ++y) {
      const auto iy = static_cast<Eigen::Index>(y);
      if (g.adjacent(x, y)) acc += g.weight(x, y) * (u(iy) - u(ix)) * (v(iy) - v(ix));
    }
    out(ix) = acc / (2.0 * g.mu(x));
  }
  return out;
}

/// |grad u|^2 = Gamma(u,u).
inline VertexFunction grad_norm_sq(const Graph& g, const VertexFunction& u) { return gradient_form(g, u, u); }

/// Constants of the refined elliptic estimate
///   max u - min u <= chain_factor * B * max(Laplacian u).
struct EllipticConstants {
  double A = 0.0;
  double B = 0.0;
  /// 1 + A + ... + A^(n-2), summed term by term so A == 1 is regular.
  double chain_factor = 0.0;
};

inline EllipticConstants elliptic_constants(const Graph& g) {
  const std::size_t n = g.vertex_count();
  EllipticConstants k;
  bool any_edge = false;
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y = 0; y < n; ++y) {
      if (!g.adjacent(x, y)) continue;
      any_edge = true;
      k.A = std::max(k.A, g.degree(x) / g.weight(y, x));
      k.B = std::max(k.B, g.mu(x) / g.weight(y, x));
    }
  }
  if (!any_edge) throw Error(Errc::NoEdges, "elliptic constants need at least one edge");
  double term = 1.0;
  for (std::size_t i = 0; i + 2 <= n; ++i) {
    k.chain_factor += term;
    term *= k.A;
  }
  return k;
}

/// Symmetric matrix D^{1/2} (-M) D^{-1/2}, D = diag(mu); it has the
/// spectrum of -Laplacian.
inline Eigen::MatrixXd symmetrized(const Graph& g, const LinearOperator& m) {
  const Eigen::VectorXd s = g.mu().cwiseSqrt();
  Eigen::MatrixXd out = s.asDiagonal() * m * s.cwiseInverse().asDiagonal();
  return 0.5 * (out + out.transpose());
}

/// Largest eigenvalue of -Laplacian.
inline double largest_laplacian_eigenvalue(const Graph& g) {
  if (g.vertex_count() == 1) return 0.0;
  const Eigen::MatrixXd s = symmetrized(g, -laplacian_matrix(g));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues().maxCoeff());
}

/// Fewest-edge path from a to b over positive-weight edges (BFS, ties go to
/// the lower vertex index).
inline std::vector<Vertex> shortest_path(const Graph& g, Vertex a, Vertex b) {
  const std::size_t n = g.vertex_count();
  if (a >= n || b >= n) throw Error(Errc::DimensionMismatch, "vertex index out of range");
  std::vector<std::optional<Vertex>> parent(n);
  std::vector<bool> seen(n, false);
  std::deque<Vertex> queue{a};
  seen[a] = true;
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    if (x == b) break;
    for (Vertex y = 0; y < n; ++y) {
      if (!seen[y] && g.adjacent(x, y)) {
        seen[y] = true;
        parent[y] = x;
        queue.push_back(y);
      }
    }
  }
  if (!seen[b]) throw Error(Errc::Disconnected, g.label(b) + " unreachable from " + g.label(a));
  std::vector<Vertex> path{b};
  while (path.back() != a) path.push_back(*parent[path.back()]);
  return {path.rbegin(), path.rend()};
}

/// Throws NonFinite unless every entry is finite.
inline void require_finite(const VertexFunction& f, const char* what) {
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (!std::isfinite(f(i))) throw Error(Errc::NonFinite, std::string(what) + " entry " + std::to_string(i));
}

}  // namespace sgdeg
