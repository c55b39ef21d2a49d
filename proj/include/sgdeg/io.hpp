#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "sgdeg/checks.hpp"
#include "sgdeg/degree.hpp"

namespace sgdeg {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

/// Parses JSON text; syntax errors become ParseError with line and column.
inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

template <class T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(Errc::ParseError, where + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, where + ": bad \"" + key + "\": " + e.what());
  }
}

}  // namespace detail

/// {"vertices":[{"id":..,"mu":..}], "edges":[{"u":..,"v":..,"w":..}]}
inline Graph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw Error(Errc::ParseError, "graph: \"vertices\" array required");
  std::vector<std::pair<std::string, double>> vertices;
  for (const auto& v : j["vertices"])
    vertices.emplace_back(detail::get_field<std::string>(v, "id", "vertex"), detail::get_field<double>(v, "mu", "vertex"));
  std::vector<Graph::EdgeSpec> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw Error(Errc::ParseError, "graph: \"edges\" must be an array");
    for (const auto& e : j["edges"])
      edges.push_back({detail::get_field<std::string>(e, "u", "edge"), detail::get_field<std::string>(e, "v", "edge"),
                       detail::get_field<double>(e, "w", "edge")});
  }
  return Graph::from_edges(vertices, edges);
}

/// Reads a {vertex id -> value} map with exactly one entry per vertex.
inline VertexFunction vertex_function_from_json(const Graph& g, const json& j, const std::string& what) {
  if (!j.is_object()) throw Error(Errc::ParseError, "\"" + what + "\" must map vertex ids to numbers");
  VertexFunction f(static_cast<Eigen::Index>(g.vertex_count()));
  for (const auto& [key, value] : j.items()) {
    if (!g.index_of(key)) throw Error(Errc::ParseError, "\"" + what + "\" names unknown vertex " + key);
    if (!value.is_number()) throw Error(Errc::ParseError, "\"" + what + "\"[" + key + "] is not a number");
  }
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    if (!j.contains(g.label(x))) throw Error(Errc::ParseError, "\"" + what + "\" missing vertex " + g.label(x));
    f(static_cast<Eigen::Index>(x)) = j[g.label(x)].get<double>();
  }
  return f;
}

inline json to_json(const Graph& g, const VertexFunction& f) {
  json j = json::object();
  for (Vertex x = 0; x < g.vertex_count(); ++x) j[g.label(x)] = f(static_cast<Eigen::Index>(x));
  return j;
}

/// Optional "solver" object of a problem file.
struct SolverSettings {
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<double> dedup_tol;
  std::optional<double> morse_tol;
  std::optional<double> step_clamp;
  std::optional<std::size_t> starts;
  std::optional<double> radius;
  std::optional<std::uint64_t> seed;
};

struct LoadedProblem {
  std::variant<Problem, KWProblem> problem;
  SolverSettings solver;

  bool is_kw() const { return std::holds_alternative<KWProblem>(problem); }
  const Graph& graph() const {
    return is_kw() ? std::get<KWProblem>(problem).graph : std::get<Problem>(problem).graph;
  }
  /// The residual map as a sinh-Gordon problem (h- == 0 for Kazdan-Warner).
  Problem as_problem() const { return is_kw() ? to_problem(std::get<KWProblem>(problem)) : std::get<Problem>(problem); }
};

inline SolverSettings solver_settings_from_json(const json& j) {
  SolverSettings s;
  if (!j.is_object()) throw Error(Errc::ParseError, "\"solver\" must be an object");
  try {
    if (j.contains("tol")) s.tol = j["tol"].get<double>();
    if (j.contains("max_iter")) s.max_iter = j["max_iter"].get<int>();
    if (j.contains("dedup_tol")) s.dedup_tol = j["dedup_tol"].get<double>();
    if (j.contains("morse_tol")) s.morse_tol = j["morse_tol"].get<double>();
    if (j.contains("step_clamp")) s.step_clamp = j["step_clamp"].get<double>();
    if (j.contains("starts")) s.starts = j["starts"].get<std::size_t>();
    if (j.contains("radius")) s.radius = j["radius"].get<double>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("\"solver\": ") + e.what());
  }
  return s;
}

/// Graph format plus "h_plus"/"h_minus" (or "h" for Kazdan-Warner) and "c".
inline LoadedProblem problem_from_json(const json& j) {
  Graph g = graph_from_json(j);
  const double c = detail::get_field<double>(j, "c", "problem");
  LoadedProblem out{Problem{}, {}};
  const bool kw = j.contains("h");
  if (kw && (j.contains("h_plus") || j.contains("h_minus")))
    throw Error(Errc::ParseError, "problem: give either \"h\" or \"h_plus\"/\"h_minus\", not both");
  if (kw) {
    KWProblem p{g, vertex_function_from_json(g, j["h"], "h"), c};
    validate_problem(p);
    out.problem = std::move(p);
  } else {
    if (!j.contains("h_plus") || !j.contains("h_minus"))
      throw Error(Errc::ParseError, "problem: \"h_plus\" and \"h_minus\" required");
    Problem p{g, vertex_function_from_json(g, j["h_plus"], "h_plus"), vertex_function_from_json(g, j["h_minus"], "h_minus"), c};
    validate_problem(p);
    out.problem = std::move(p);
  }
  if (j.contains("solver")) out.solver = solver_settings_from_json(j["solver"]);
  return out;
}

inline json graph_to_json(const Graph& g) {
  json j;
  j["vertices"] = json::array();
  j["edges"] = json::array();
  for (Vertex x = 0; x < g.vertex_count(); ++x) j["vertices"].push_back({{"id", g.label(x)}, {"mu", g.mu(x)}});
  for (Vertex x = 0; x < g.vertex_count(); ++x)
    for (Vertex y = x + 1; y < g.vertex_count(); ++y)
      if (g.adjacent(x, y)) j["edges"].push_back({{"u", g.label(x)}, {"v", g.label(y)}, {"w", g.weight(x, y)}});
  return j;
}

inline json problem_to_json(const Problem& p) {
  json j = graph_to_json(p.graph);
  j["h_plus"] = to_json(p.graph, p.h_plus);
  j["h_minus"] = to_json(p.graph, p.h_minus);
  j["c"] = p.c;
  return j;
}

inline json problem_to_json(const KWProblem& p) {
  json j = graph_to_json(p.graph);
  j["h"] = to_json(p.graph, p.h);
  j["c"] = p.c;
  return j;
}

inline json to_json(const SolverConfig& cfg) {
  return {{"tol", cfg.tol},
          {"max_iter", cfg.max_iter},
          {"dedup_tol", cfg.dedup_tol},
          {"morse_tol", cfg.morse_tol},
          {"step_clamp", cfg.step_clamp}};
}

inline json to_json(const Graph& g, const Solution& s) {
  return {{"u", to_json(g, s.u)},
          {"residual_inf_norm", s.residual_inf_norm},
          {"det_sign", s.det_sign},
          {"iterations", s.iterations},
          {"converged_from", to_json(g, s.converged_from)}};
}

inline json to_json(const Graph& g, const DegreeReport& r) {
  json sols = json::array();
  for (const auto& s : r.solutions) sols.push_back(to_json(g, s));
  return {{"formula_degree", r.formula_degree ? json(*r.formula_degree) : json("not_applicable")},
          {"numeric_degree", r.numeric_degree ? json(*r.numeric_degree) : json("indeterminate")},
          {"solutions", sols},
          {"radius", r.radius},
          {"radius_stable", r.radius_stable},
          {"agreement", to_string(r.agreement)},
          {"notes", r.notes},
          {"solver", {{"seed", r.seed}, {"starts", r.starts}, {"failures", r.failures}, {"c_enumerated", r.c_enumerated}}}};
}

inline json to_json(const Graph* g, const CheckOutcome& o) {
  json j = {{"name", o.name}, {"passed", o.passed}, {"margin", o.margin}};
  if (o.witness) {
    json w = {{"values", o.witness->values}, {"detail", o.witness->detail}};
    if (o.witness->vertex) {
      if (g) w["vertex"] = g->label(*o.witness->vertex);
      else w["vertex"] = *o.witness->vertex;
    } else {
      w["vertex"] = nullptr;
    }
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

/// Provenance block embedded in every output.
struct RunManifest {
  std::string command;
  std::string input_path;
  SolverConfig config;
  std::uint64_t seed = 42;
  std::size_t starts = kDefaultStarts;
  std::optional<double> radius;
  std::string tool_version = kToolVersion;
  std::int64_t wall_time_ms = 0;
};

inline json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"input_path", m.input_path},
          {"config", to_json(m.config)},
          {"seed", m.seed},
          {"starts", m.starts},
          {"radius", m.radius ? json(*m.radius) : json(nullptr)},
          {"tool_version", m.tool_version},
          {"wall_time_ms", m.wall_time_ms}};
}

}  // namespace sgdeg
