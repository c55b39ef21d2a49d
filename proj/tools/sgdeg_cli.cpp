// Command-line front end: solve, enumerate, degree, sweep, examples, verify.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sgdeg/io.hpp"
#include "sgdeg/sgdeg.hpp"

namespace {

using namespace sgdeg;

enum Exit { kOk = 0, kInputError = 1, kSolverFailure = 2, kMismatch = 3 };

struct Options {
  std::string input;
  std::string out;
  std::string format = "json";
  std::string start;
  std::string example;
  std::string param = "c";
  std::uint64_t seed = 42;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<double> radius;
  std::optional<std::size_t> starts;
  std::optional<double> c;
  double from = -3.0;
  double to = 0.0;
  std::size_t steps = 31;
  std::size_t trials = 200;
  bool formula_only = false;
  bool seed_given = false;
};

int exit_code_for(Errc e) {
  switch (e) {
    case Errc::DimensionMismatch:
    case Errc::AsymmetricWeights:
    case Errc::NonpositiveMeasure:
    case Errc::Disconnected:
    case Errc::SelfLoop:
    case Errc::NoEdges:
    case Errc::NonFinite:
    case Errc::ParseError:
    case Errc::UnknownExample:
    case Errc::BothZero:
    case Errc::ZeroH:
    case Errc::PreconditionFailed:
    case Errc::NotTwoVertex:
    case Errc::SingleVertex:
    case Errc::EmptyV0:
      return kInputError;
    default:
      return kSolverFailure;
  }
}

// Resolved run settings: CLI flags override the problem file's "solver".
struct Run {
  SolverConfig cfg;
  std::uint64_t seed = 42;
  std::size_t starts = kDefaultStarts;
  std::optional<double> radius;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
};

Run resolve(const Options& o, const SolverSettings& file) {
  Run r;
  if (file.tol) r.cfg.tol = *file.tol;
  if (file.max_iter) r.cfg.max_iter = *file.max_iter;
  if (file.dedup_tol) r.cfg.dedup_tol = *file.dedup_tol;
  if (file.morse_tol) r.cfg.morse_tol = *file.morse_tol;
  if (file.step_clamp) r.cfg.step_clamp = *file.step_clamp;
  if (file.starts) r.starts = *file.starts;
  if (file.radius) r.radius = *file.radius;
  if (file.seed) r.seed = *file.seed;
  if (o.tol) r.cfg.tol = *o.tol;
  if (o.max_iter) r.cfg.max_iter = *o.max_iter;
  if (o.starts) r.starts = *o.starts;
  if (o.radius) r.radius = *o.radius;
  if (o.seed_given) r.seed = o.seed;
  validate_config(r.cfg);
  if (r.starts == 0) throw Error(Errc::PreconditionFailed, "--starts must be positive");
  if (r.radius && !(*r.radius > 0.0)) throw Error(Errc::PreconditionFailed, "--radius must be positive");
  return r;
}

json manifest(const std::string& command, const Options& o, const Run& r) {
  RunManifest m;
  m.command = command;
  m.input_path = o.input;
  m.config = r.cfg;
  m.seed = r.seed;
  m.starts = r.starts;
  m.radius = r.radius;
  m.wall_time_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - r.t0).count();
  return to_json(m);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error(Errc::ParseError, "cannot write " + o.out);
  f << text;
}

void emit(const Options& o, const json& j) { emit(o, j.dump(2) + "\n"); }

int cmd_solve(const Options& o) {
  const LoadedProblem lp = problem_from_json(parse_json_text(read_file(o.input)));
  const Run r = resolve(o, lp.solver);
  const Problem p = lp.as_problem();
  VertexFunction u0 = VertexFunction::Zero(static_cast<Eigen::Index>(p.graph.vertex_count()));
  if (!o.start.empty()) u0 = vertex_function_from_json(p.graph, parse_json_text(read_file(o.start)), "start");
  const Solution s = newton_solve(p, u0, r.cfg);
  json j;
  j["solution"] = to_json(p.graph, s);
  j["manifest"] = manifest("solve", o, r);
  emit(o, j);
  return kOk;
}

int cmd_enumerate(const Options& o) {
  const LoadedProblem lp = problem_from_json(parse_json_text(read_file(o.input)));
  const Run r = resolve(o, lp.solver);
  const Problem p = lp.as_problem();
  json j;
  json sols = json::array();
  if (r.radius) {
    const Enumeration e = enumerate_solutions(p, *r.radius, r.starts, r.cfg, r.seed);
    for (const auto& s : e.solutions) sols.push_back(to_json(p.graph, s));
    j = {{"radius", *r.radius}, {"radius_selected", false}, {"starts", e.starts}, {"failures", e.failures},
         {"outside_radius", e.outside_radius}, {"degenerate", e.degenerate}};
  } else {
    const RadiusSelection rs = select_radius(p, r.cfg, r.seed, r.starts);
    for (const auto& s : rs.solutions) sols.push_back(to_json(p.graph, s));
    j = {{"radius", rs.radius}, {"radius_selected", true}, {"radius_stable", rs.stable}, {"starts", rs.starts},
         {"failures", rs.failures}, {"counts_by_radius", rs.counts}};
  }
  j["solutions"] = sols;
  j["manifest"] = manifest("enumerate", o, r);
  emit(o, j);
  return kOk;
}

int cmd_degree(const Options& o) {
  const LoadedProblem lp = problem_from_json(parse_json_text(read_file(o.input)));
  const Run r = resolve(o, lp.solver);
  DegreeReport rep;
  if (o.formula_only) {
    rep.formula_degree = lp.is_kw() ? kw_degree_formula(std::get<KWProblem>(lp.problem))
                                    : degree_formula(std::get<Problem>(lp.problem));
    rep.agreement = Agreement::formula_only;
    rep.seed = r.seed;
    rep.c_enumerated = lp.as_problem().c;
    rep.notes.push_back("numeric degree skipped (--formula-only)");
  } else {
    rep = lp.is_kw() ? degree_numeric(std::get<KWProblem>(lp.problem), r.cfg, r.seed, r.starts)
                     : degree_numeric(std::get<Problem>(lp.problem), r.cfg, r.seed, r.starts);
  }
  json j = to_json(lp.graph(), rep);
  j["equation"] = lp.is_kw() ? "kazdan-warner" : "sinh-gordon";
  j["manifest"] = manifest("degree", o, r);
  emit(o, j);
  return rep.agreement == Agreement::mismatch ? kMismatch : kOk;
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string csv_optional(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, double>) return csv_number(*v);
  else return std::to_string(*v);
}

int cmd_sweep(const Options& o) {
  if (o.param != "c") throw Error(Errc::ParseError, "--param: only \"c\" can be swept");
  const LoadedProblem lp = problem_from_json(parse_json_text(read_file(o.input)));
  const Run r = resolve(o, lp.solver);
  const SweepResult res = lp.is_kw()
                              ? sweep_c(std::get<KWProblem>(lp.problem), o.from, o.to, o.steps, r.cfg, r.seed, r.starts)
                              : sweep_c(std::get<Problem>(lp.problem), o.from, o.to, o.steps, r.cfg, r.seed, r.starts);
  json man = manifest("sweep", o, r);
  man["sweep"] = {{"param", o.param}, {"from", o.from}, {"to", o.to}, {"steps", o.steps}};

  if (o.format == "json") {
    json rows = json::array();
    for (const auto& row : res.rows)
      rows.push_back({{"c", row.c},
                      {"n_solutions", row.n_solutions},
                      {"numeric_degree", row.numeric_degree ? json(*row.numeric_degree) : json(nullptr)},
                      {"formula_degree", row.formula_degree ? json(*row.formula_degree) : json(nullptr)},
                      {"min_residual", row.min_residual ? json(*row.min_residual) : json(nullptr)},
                      {"radius", row.radius}});
    json j = {{"rows", rows},
              {"cstar_estimate", res.cstar_estimate ? json(*res.cstar_estimate) : json(nullptr)},
              {"cstar_bracket", res.cstar_bracket ? json({res.cstar_bracket->first, res.cstar_bracket->second}) : json(nullptr)},
              {"cstar_note", "bisection estimate of the solvability threshold, not its infimum definition"},
              {"manifest", man}};
    emit(o, j);
    return kOk;
  }

  std::ostringstream out;
  std::istringstream lines(man.dump(2));
  for (std::string line; std::getline(lines, line);) out << "# " << line << "\n";
  out << "c,n_solutions,numeric_degree,formula_degree,min_residual\n";
  for (const auto& row : res.rows)
    out << csv_number(row.c) << "," << row.n_solutions << "," << csv_optional(row.numeric_degree) << ","
        << csv_optional(row.formula_degree) << "," << csv_optional(row.min_residual) << "\n";
  if (res.cstar_estimate)
    out << "# cstar_estimate=" << csv_number(*res.cstar_estimate) << " bracket=[" << csv_number(res.cstar_bracket->first)
        << "," << csv_number(res.cstar_bracket->second) << "] (bisection estimate, not the infimum)\n";
  emit(o, out.str());
  return kOk;
}

int cmd_examples(const Options& o) {
  Run r = resolve(o, {});
  const double c = o.c.value_or(1.0);
  const auto rows = run_builtin_example(o.example, c, r.cfg, r.seed, r.starts);
  bool all = true;
  for (const auto& row : rows) all = all && row.passed;

  if (o.format == "json") {
    json jr = json::array();
    for (const auto& row : rows)
      jr.push_back({{"check", row.check}, {"expected", row.expected}, {"observed", row.observed}, {"passed", row.passed}});
    Options named = o;
    named.input = "builtin:" + o.example;
    json j = {{"example", o.example}, {"c", c}, {"rows", jr}, {"passed", all}, {"manifest", manifest("examples", named, r)}};
    emit(o, j);
  } else {
    std::ostringstream t;
    t << o.example;
    if (o.example != "kw-appendix") t << " (c = " << c << ")";
    t << "\n";
    for (const auto& row : rows)
      t << (row.passed ? "  PASS  " : "  FAIL  ") << row.check << ": expected " << row.expected << ", got "
        << row.observed << "\n";
    emit(o, t.str());
  }
  return all ? kOk : kMismatch;
}

int cmd_verify(const Options& o) {
  Run r = resolve(o, {});
  LemmaSuiteOptions opt;
  opt.seed = r.seed;
  opt.trials_per_check = o.trials;
  std::optional<Graph> g;
  if (!o.input.empty()) {
    g = graph_from_json(parse_json_text(read_file(o.input)));
    if (g->vertex_count() < 2) throw Error(Errc::SingleVertex, "verify needs at least two vertices");
  }
  const auto outcomes = run_lemma_suite(opt, g ? &*g : nullptr);
  json arr = json::array();
  bool all = true;
  for (const auto& oc : outcomes) {
    arr.push_back(to_json(g ? &*g : nullptr, oc));
    all = all && oc.passed;
  }
  json man = manifest("verify", o, r);
  man["trials_per_check"] = o.trials;
  emit(o, json{{"outcomes", arr}, {"manifest", man}});
  return all ? kOk : kSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degree and solutions of sinh-Gordon and Kazdan-Warner equations on weighted graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  auto* seed = app.add_option("--seed", o.seed, "RNG seed for multistart and random suites (default 42)");
  app.add_option("--tol", o.tol, "residual tolerance (default 1e-12)");
  app.add_option("--max-iter", o.max_iter, "Newton iteration cap (default 100)");
  app.add_option("--radius", o.radius, "search radius; selected automatically when omitted");
  app.add_option("--starts", o.starts, "multistart points per radius (default 200)");
  app.add_option("--out", o.out, "write the report here instead of stdout");
  app.add_option("--format", o.format, "json, csv (sweep only) or text (examples only); sweep defaults to csv, examples to text")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  auto* solve = app.add_subcommand("solve", "Newton from u0 = 0 (or --start)");
  solve->add_option("input", o.input, "problem JSON")->required();
  solve->add_option("--start", o.start, "JSON map of vertex id to starting value");

  auto* enumerate = app.add_subcommand("enumerate", "all roots found by multistart Newton");
  enumerate->add_option("input", o.input, "problem JSON")->required();

  auto* degree = app.add_subcommand("degree", "closed-form and numeric degree");
  degree->add_option("input", o.input, "problem JSON")->required();
  degree->add_flag("--formula-only", o.formula_only, "skip the numeric degree");

  auto* sweep = app.add_subcommand("sweep", "solution count and degree over a range of c");
  sweep->add_option("input", o.input, "problem JSON")->required();
  sweep->add_option("--param", o.param, "swept parameter (only c)");
  sweep->add_option("--from", o.from, "range start (default -3)");
  sweep->add_option("--to", o.to, "range end (default 0)");
  sweep->add_option("--steps", o.steps, "grid points (default 31; 0 gives an empty table)");

  auto* examples = app.add_subcommand("examples", "built-in two-vertex and Kazdan-Warner instances");
  examples->add_option("name", o.example, "case1, case2, case3, case4 or kw-appendix")->required();
  examples->add_option("--c", o.c, "value of c (default 1)");

  auto* verify = app.add_subcommand("verify", "randomized lemma checks");
  verify->add_option("input", o.input, "graph JSON; random graphs when omitted");
  verify->add_option("--trials", o.trials, "trials per check (default 200)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }
  o.seed_given = seed->count() > 0;
  if (o.format == "csv" && !sweep->parsed()) {
    std::cerr << "error: --format csv applies to sweep only\n";
    return kInputError;
  }
  if (sweep->parsed() && !app.get_option("--format")->count()) o.format = "csv";
  if (examples->parsed() && !app.get_option("--format")->count()) o.format = "text";
  if (o.format == "text" && !examples->parsed()) {
    std::cerr << "error: --format text applies to examples only\n";
    return kInputError;
  }

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (enumerate->parsed()) return cmd_enumerate(o);
    if (degree->parsed()) return cmd_degree(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (examples->parsed()) return cmd_examples(o);
    if (verify->parsed()) return cmd_verify(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kInputError;
}
