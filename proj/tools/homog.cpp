/**
 * @file homog.cpp
 * Command-line driver: maps subcommands onto the library operations and
 * writes deterministic, diffable result files plus a run manifest.
 *
 * Exit codes: 0 all checks passed, 1 a verification/property check failed,
 * 2 execution error (bad arguments, malformed input, solver exception).
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "homog/cell_solver.hpp"
#include "homog/energy_models.hpp"
#include "homog/homogenizer.hpp"
#include "homog/numerics.hpp"
#include "homog/report.hpp"
#include "homog/tiling.hpp"
#include "homog/verifier.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* yn(bool b) { return b ? "yes" : "no"; }

// ------------------------------------------------------------- run state ---

struct TaskEntry {
  std::string name;
  std::string status = "planned";
  double seconds = 0.0;
  json notes = json::object();
};

struct RunContext {
  std::filesystem::path dir;
  std::string command;
  json config_echo;
  std::vector<TaskEntry> tasks;
  std::vector<std::string> outputs;

  void write_manifest(const std::string& status) const {
    json m;
    m["version"] = kVersion;
    m["command"] = command;
    m["config"] = config_echo;
    m["status"] = status;
    m["tasks"] = json::array();
    for (const TaskEntry& t : tasks) {
      json e;
      e["name"] = t.name;
      e["status"] = t.status;
      e["wall_clock_seconds"] = t.seconds;
      if (!t.notes.empty()) e["notes"] = t.notes;
      m["tasks"].push_back(e);
    }
    m["outputs"] = outputs;
    std::ofstream os(dir / "manifest.json", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write manifest in " + dir.string());
    os << m.dump(2) << "\n";
  }

  void write_result(const std::string& filename, const std::string& content) {
    std::ofstream os(dir / filename, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (dir / filename).string());
    os << content;
    outputs.push_back(filename);
  }
};

RunContext make_context(const std::string& command, const std::string& output_dir,
                        const json& config_echo) {
  RunContext ctx;
  std::string dir = output_dir;
  if (dir.empty()) {
    const char* env = std::getenv("HOMOG_OUT");
    dir = env && *env ? env : ".";
  }
  ctx.dir = dir;
  std::filesystem::create_directories(ctx.dir);
  ctx.command = command;
  ctx.config_echo = config_echo;
  return ctx;
}

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// ------------------------------------------------------------- options -----

struct CommonOpts {
  std::string output_dir;
  std::string format = "text";
  std::uint64_t seed = 0;
};

struct SolverOpts {
  long max_iterations = 5000;
  double tolerance = 1e-7;
  int restarts = 0;
  double init_scale = 0.1;

  homog::SolveConfig to_config(std::uint64_t seed) const {
    homog::SolveConfig c;
    c.max_iterations = max_iterations;
    c.gradient_tolerance = tolerance;
    c.restarts = restarts;
    c.init_scale = init_scale;
    c.seed = seed;
    return c;
  }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--output", o.output_dir,
                  "output directory (default: $HOMOG_OUT or the working directory)");
  cmd->add_option("--format", o.format, "result file format")
      ->check(CLI::IsMember({"text", "delimited", "structured"}));
  cmd->add_option("--seed", o.seed, "random seed");
}

void add_solver(CLI::App* cmd, SolverOpts& o) {
  cmd->add_option("--max-iterations", o.max_iterations, "descent iteration budget per solve");
  cmd->add_option("--tolerance", o.tolerance, "gradient sup-norm stopping tolerance");
  cmd->add_option("--restarts", o.restarts, "extra random starts per solve");
  cmd->add_option("--init-scale", o.init_scale, "amplitude of random start fields");
}

std::string result_filename(const std::string& command, const std::string& format) {
  if (format == "delimited") return command + ".csv";
  if (format == "structured") return command + ".json";
  return command + ".txt";
}

homog::Lagrangian lagrangian_for(const std::string& model) {
  if (std::filesystem::exists(model))
    return homog::load_quadratic_form(model).to_lagrangian();
  return homog::make_model(model);
}

homog::Matrix parse_Y(const std::string& literal, const homog::Lagrangian& L) {
  if (literal.empty())
    throw std::invalid_argument("missing --Y (matrix literal, rows ';'-separated)");
  const homog::Matrix Y = homog::parse_matrix(literal);
  if (Y.rows() != L.N || Y.cols() != L.m)
    throw std::invalid_argument("Y is " + std::to_string(Y.rows()) + "x" +
                                std::to_string(Y.cols()) + " but model '" + L.name +
                                "' needs " + std::to_string(L.N) + "x" + std::to_string(L.m));
  return Y;
}

std::string report_text(const homog::VerificationReport& rep) {
  std::ostringstream os;
  rep.write_text(os);
  return os.str();
}

void report_csv(std::string& csv, const std::string& task, const homog::VerificationReport& rep) {
  for (const homog::Clause& c : rep.clauses)
    csv += task + "," + rep.name + "," + c.name + "," + (c.pass ? "1" : "0") + "," +
           fmt(c.margin) + "\n";
}

// ---------------------------------------------------------- homogenize -----

int run_homogenize(const std::string& model, const std::string& y_literal,
                   std::vector<double> t_values, int resolution, const SolverOpts& solver,
                   const CommonOpts& common) {
  const homog::Lagrangian L = lagrangian_for(model);
  const homog::Matrix Y = parse_Y(y_literal, L);
  if (t_values.empty()) t_values = {1.0, 2.0, 4.0};

  json echo;
  echo["model"] = model;
  echo["Y"] = homog::format_matrix(Y);
  echo["t"] = t_values;
  echo["resolution"] = resolution;
  echo["seed"] = common.seed;
  echo["format"] = common.format;
  echo["max_iterations"] = solver.max_iterations;
  echo["tolerance"] = solver.tolerance;
  echo["restarts"] = solver.restarts;
  echo["init_scale"] = solver.init_scale;

  RunContext ctx = make_context("homogenize", common.output_dir, echo);
  ctx.tasks.push_back({"estimate-f-hom"});
  ctx.write_manifest("running");

  Stopwatch watch;
  homog::HomSchedule sched;
  sched.t_values = t_values;
  sched.nodes_per_unit = resolution;
  sched.solve = solver.to_config(common.seed);
  const homog::HomResult res = homog::estimate_f_hom(L, Y, sched);

  TaskEntry& task = ctx.tasks.back();
  task.seconds = watch.seconds();
  task.status = res.growth_ok ? "ok" : "failed";
  task.notes["all_converged"] = res.all_converged;
  task.notes["growth_ok"] = res.growth_ok;
  task.notes["f_hom"] = res.f_hom;

  std::string out;
  if (common.format == "delimited") {
    out = "t,energy,iterations,converged\n";
    for (const homog::CellEstimate& e : res.estimates)
      out += fmt(e.t) + "," + fmt(e.energy) + "," + std::to_string(e.iterations) + "," +
             (e.converged ? "1" : "0") + "\n";
    out += "\nf_hom,slope,fit_residual,all_converged,growth_ok\n";
    out += fmt(res.f_hom) + "," + fmt(res.slope) + "," + fmt(res.fit_residual) + "," +
           (res.all_converged ? "1" : "0") + "," + (res.growth_ok ? "1" : "0") + "\n";
  } else if (common.format == "structured") {
    json j;
    j["model"] = model;
    j["Y"] = homog::format_matrix(Y);
    j["f_hom"] = res.f_hom;
    j["slope"] = res.slope;
    j["fit_residual"] = res.fit_residual;
    j["fit_model"] = res.fit_model;
    j["all_converged"] = res.all_converged;
    j["growth_ok"] = res.growth_ok;
    j["estimates"] = json::array();
    for (const homog::CellEstimate& e : res.estimates)
      j["estimates"].push_back(
          {{"t", e.t}, {"energy", e.energy}, {"iterations", e.iterations}, {"converged", e.converged}});
    out = j.dump(2) + "\n";
  } else {
    out = "homogenize\n";
    out += "model = " + model + "\n";
    out += "Y = " + homog::format_matrix(Y) + "\n";
    out += "nodes_per_unit = " + std::to_string(resolution) + "\n";
    out += "f_hom = " + fmt(res.f_hom) + "\n";
    out += "slope = " + fmt(res.slope) + "\n";
    out += "fit_residual = " + fmt(res.fit_residual) + "\n";
    out += std::string("fit_model = ") + res.fit_model + "\n";
    out += std::string("all_converged = ") + yn(res.all_converged) + "\n";
    out += std::string("growth_ok = ") + yn(res.growth_ok) + "\n";
    for (const homog::CellEstimate& e : res.estimates)
      out += "estimate t=" + fmt(e.t) + " energy=" + fmt(e.energy) +
             " iterations=" + std::to_string(e.iterations) + " converged=" + yn(e.converged) +
             "\n";
  }
  ctx.write_result(result_filename("homogenize", common.format), out);
  ctx.write_manifest("complete");
  return res.growth_ok ? 0 : 1;
}

// ----------------------------------------------------------------- cell ----

int run_cell(const std::string& model, const std::string& y_literal, double t, int resolution,
             const SolverOpts& solver, const CommonOpts& common) {
  const homog::Lagrangian L = lagrangian_for(model);
  const homog::Matrix Y = parse_Y(y_literal, L);
  if (!(t > 0.0)) throw std::invalid_argument("cell: t must be positive");

  json echo;
  echo["model"] = model;
  echo["Y"] = homog::format_matrix(Y);
  echo["t"] = t;
  echo["resolution"] = resolution;
  echo["seed"] = common.seed;
  echo["format"] = common.format;
  echo["max_iterations"] = solver.max_iterations;
  echo["tolerance"] = solver.tolerance;
  echo["restarts"] = solver.restarts;
  echo["init_scale"] = solver.init_scale;

  RunContext ctx = make_context("cell", common.output_dir, echo);
  ctx.tasks.push_back({"cell-solve"});
  ctx.write_manifest("running");

  Stopwatch watch;
  homog::CellProblem problem;
  problem.lagrangian = L;
  problem.Y = Y;
  problem.grid.dim = L.m;
  problem.grid.side_length = t;
  problem.grid.nodes_per_side = std::max(1, static_cast<int>(std::llround(t * resolution)));
  const homog::CellSolution sol = homog::minimize(problem, solver.to_config(common.seed));
  const double total = sol.energy * std::pow(t, L.m);

  TaskEntry& task = ctx.tasks.back();
  task.seconds = watch.seconds();
  task.status = "ok";
  task.notes["converged"] = sol.converged;
  task.notes["line_search_failed"] = sol.line_search_failed;

  std::string out;
  if (common.format == "delimited") {
    out = "field,value\n";
    out += "normalized_energy," + fmt(sol.energy) + "\n";
    out += "total_energy," + fmt(total) + "\n";
    out += "iterations," + std::to_string(sol.iterations_used) + "\n";
    out += std::string("converged,") + (sol.converged ? "1" : "0") + "\n";
    out += std::string("line_search_failed,") + (sol.line_search_failed ? "1" : "0") + "\n";
    for (std::size_t i = 0; i < sol.restart_energies.size(); ++i)
      out += "restart_energy_" + std::to_string(i) + "," + fmt(sol.restart_energies[i]) + "\n";
  } else if (common.format == "structured") {
    json j;
    j["model"] = model;
    j["Y"] = homog::format_matrix(Y);
    j["t"] = t;
    j["nodes_per_side"] = problem.grid.nodes_per_side;
    j["normalized_energy"] = sol.energy;
    j["total_energy"] = total;
    j["iterations"] = sol.iterations_used;
    j["converged"] = sol.converged;
    j["line_search_failed"] = sol.line_search_failed;
    j["restart_energies"] = sol.restart_energies;
    out = j.dump(2) + "\n";
  } else {
    out = "cell\n";
    out += "model = " + model + "\n";
    out += "Y = " + homog::format_matrix(Y) + "\n";
    out += "t = " + fmt(t) + "\n";
    out += "nodes_per_side = " + std::to_string(problem.grid.nodes_per_side) + "\n";
    out += "normalized_energy = " + fmt(sol.energy) + "\n";
    out += "total_energy = " + fmt(total) + "\n";
    out += "iterations = " + std::to_string(sol.iterations_used) + "\n";
    out += std::string("converged = ") + yn(sol.converged) + "\n";
    out += std::string("line_search_failed = ") + yn(sol.line_search_failed) + "\n";
    for (std::size_t i = 0; i < sol.restart_energies.size(); ++i)
      out += "restart_energy " + std::to_string(i) + " = " + fmt(sol.restart_energies[i]) + "\n";
  }
  ctx.write_result(result_filename("cell", common.format), out);
  ctx.write_manifest("complete");
  return 0;
}

// -------------------------------------------------------- epsilon sweep ----

int run_epsilon_sweep(const std::string& model, const std::string& y_literal,
                      std::vector<double> epsilons, std::vector<double> t_values, int resolution,
                      const SolverOpts& solver, const CommonOpts& common) {
  const homog::Lagrangian L = lagrangian_for(model);
  const homog::Matrix Y = parse_Y(y_literal, L);
  if (epsilons.empty()) epsilons = {1.0, 0.5, 0.25};
  if (t_values.empty()) t_values = {1.0, 2.0, 4.0};

  json echo;
  echo["model"] = model;
  echo["Y"] = homog::format_matrix(Y);
  echo["epsilon"] = epsilons;
  echo["t"] = t_values;
  echo["resolution"] = resolution;
  echo["seed"] = common.seed;
  echo["format"] = common.format;

  RunContext ctx = make_context("epsilon-sweep", common.output_dir, echo);
  ctx.tasks.push_back({"epsilon-sweep"});
  ctx.write_manifest("running");

  Stopwatch watch;
  homog::HomSchedule sched;
  sched.t_values = t_values;
  sched.nodes_per_unit = resolution;
  sched.solve = solver.to_config(common.seed);
  const homog::SweepReport rep = homog::epsilon_sweep_compare(L, Y, epsilons, sched);

  TaskEntry& task = ctx.tasks.back();
  task.seconds = watch.seconds();
  task.status = rep.pass ? "ok" : "failed";
  task.notes["all_converged"] = rep.all_converged;
  task.notes["final_rel_gap"] = rep.final_rel_gap;

  std::string out;
  if (common.format == "delimited") {
    out = "epsilon,energy,iterations,converged\n";
    for (const homog::SweepPoint& p : rep.points)
      out += fmt(p.epsilon) + "," + fmt(p.energy) + "," + std::to_string(p.iterations) + "," +
             (p.converged ? "1" : "0") + "\n";
    out += "\nreference,final_rel_gap,pass,all_converged\n";
    out += fmt(rep.reference) + "," + fmt(rep.final_rel_gap) + "," + (rep.pass ? "1" : "0") +
           "," + (rep.all_converged ? "1" : "0") + "\n";
  } else if (common.format == "structured") {
    json j;
    j["model"] = model;
    j["Y"] = homog::format_matrix(Y);
    j["reference"] = rep.reference;
    j["final_rel_gap"] = rep.final_rel_gap;
    j["pass"] = rep.pass;
    j["all_converged"] = rep.all_converged;
    j["points"] = json::array();
    for (const homog::SweepPoint& p : rep.points)
      j["points"].push_back({{"epsilon", p.epsilon},
                             {"energy", p.energy},
                             {"iterations", p.iterations},
                             {"converged", p.converged}});
    out = j.dump(2) + "\n";
  } else {
    out = "epsilon-sweep\n";
    out += "model = " + model + "\n";
    out += "Y = " + homog::format_matrix(Y) + "\n";
    out += "reference_f_hom = " + fmt(rep.reference) + "\n";
    out += "final_rel_gap = " + fmt(rep.final_rel_gap) + "\n";
    out += std::string("pass = ") + yn(rep.pass) + "\n";
    out += std::string("all_converged = ") + yn(rep.all_converged) + "\n";
    for (const homog::SweepPoint& p : rep.points)
      out += "point epsilon=" + fmt(p.epsilon) + " energy=" + fmt(p.energy) +
             " iterations=" + std::to_string(p.iterations) + " converged=" + yn(p.converged) +
             "\n";
  }
  ctx.write_result(result_filename("epsilon-sweep", common.format), out);
  ctx.write_manifest("complete");
  return rep.pass ? 0 : 1;
}

// --------------------------------------------------------------- tiling ----

int run_tiling(long long t, long long s, int m, const std::string& y_literal,
               const CommonOpts& common) {
  homog::TilingParams params;
  params.t = t;
  params.s = s;
  params.m = m;
  params.Y = y_literal.empty() ? homog::Matrix(1, m) : homog::parse_matrix(y_literal);

  json echo;
  echo["t"] = t;
  echo["s"] = s;
  echo["m"] = m;
  echo["Y"] = homog::format_matrix(params.Y);
  echo["format"] = common.format;

  RunContext ctx = make_context("tiling", common.output_dir, echo);
  ctx.tasks.push_back({"tiling-verify"});
  ctx.write_manifest("running");

  Stopwatch watch;
  const homog::Tiling tiling = homog::build_tiling(params);
  const homog::VerificationReport rep = homog::verify_tiling(tiling);

  TaskEntry& task = ctx.tasks.back();
  task.seconds = watch.seconds();
  task.status = rep.overall() ? "ok" : "failed";
  task.notes["blocks"] = tiling.blocks.size();

  const auto join = [](const std::vector<std::int64_t>& v) {
    std::string s_out;
    for (std::size_t i = 0; i < v.size(); ++i)
      s_out += (i ? " " : "") + std::to_string(v[i]);
    return s_out;
  };

  std::string out;
  if (common.format == "delimited") {
    out = "block,z,sigma,tau,lambda\n";
    for (std::size_t i = 0; i < tiling.blocks.size(); ++i) {
      const homog::TilingBlock& b = tiling.blocks[i];
      out += std::to_string(i) + "," + join(b.z) + "," + join(b.sigma) + "," + join(b.tau) +
             "," + join(b.lambda) + "\n";
    }
    out += "\ntask,report,clause,pass,margin\n";
    report_csv(out, "tiling", rep);
  } else if (common.format == "structured") {
    json j;
    j["t"] = t;
    j["s"] = s;
    j["m"] = m;
    j["index_count"] = tiling.index_count();
    j["remainder_measure"] = tiling.remainder_measure();
    j["blocks"] = json::array();
    for (const homog::TilingBlock& b : tiling.blocks)
      j["blocks"].push_back(
          {{"z", b.z}, {"sigma", b.sigma}, {"tau", b.tau}, {"lambda", b.lambda}});
    j["report"] = json::parse(homog::report_json(rep));
    out = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    homog::dump_tiling(tiling, os);
    os << "\n";
    rep.write_text(os);
    out = os.str();
  }
  ctx.write_result(result_filename("tiling", common.format), out);
  ctx.write_manifest("complete");
  return rep.overall() ? 0 : 1;
}

// --------------------------------------------------------------- verify ----

int run_verify(const std::string& suite, int samples, const CommonOpts& common) {
  const std::vector<std::string> known = {"all",  "products", "parity",  "relative-density",
                                          "swap", "dominance", "lsc",    "closing"};
  if (std::find(known.begin(), known.end(), suite) == known.end())
    throw std::invalid_argument("unknown suite '" + suite + "'");
  const auto want = [&](const char* name) { return suite == "all" || suite == name; };

  json echo;
  echo["suite"] = suite;
  echo["samples"] = samples;
  echo["seed"] = common.seed;
  echo["format"] = common.format;

  RunContext ctx = make_context("verify", common.output_dir, echo);

  std::vector<std::pair<std::string, std::function<homog::VerificationReport()>>> checks;
  if (want("products")) {
    checks.emplace_back("product-finsler", [&] {
      return homog::product_system_infeasibility(homog::finsler_product_system(), 64, common.seed);
    });
    checks.emplace_back("product-cartan", [&] {
      return homog::product_system_infeasibility(
          homog::cartan_product_system(homog::make_cartan_noneven()), 64, common.seed);
    });
    checks.emplace_back("product-dominance", [&] {
      return homog::product_system_infeasibility(
          homog::dominance_product_system(homog::quintic_smoothstep_cutoff()), 64, common.seed);
    });
    checks.emplace_back("product-feasible-control", [&] {
      return homog::product_system_infeasibility(homog::feasible_control_system(), 64,
                                                 common.seed);
    });
  }
  if (want("parity")) {
    checks.emplace_back("parity-abs",
                        [] { return homog::cartan_parity_check(homog::make_cartan_abs()); });
    checks.emplace_back("parity-3abs",
                        [] { return homog::cartan_parity_check(homog::make_cartan_3abs()); });
    checks.emplace_back("parity-noneven",
                        [] { return homog::cartan_parity_check(homog::make_cartan_noneven()); });
  }
  if (want("relative-density")) {
    checks.emplace_back("relative-density-L1", [] {
      return homog::relative_density_check(homog::relative_density_builtin_Y(), 0.5, 1.0);
    });
    checks.emplace_back("relative-density-L10", [] {
      return homog::relative_density_check(homog::relative_density_builtin_Y(), 0.5, 10.0);
    });
  }
  if (want("swap")) {
    const homog::Lagrangian integrand = homog::make_closing_quadratic_form().to_lagrangian();
    homog::Grid grid;
    grid.dim = 2;
    grid.side_length = 1.0;
    grid.nodes_per_side = 8;
    for (const homog::SwapMode mode :
         {homog::SwapMode::counteriso, homog::SwapMode::bild, homog::SwapMode::urbild}) {
      checks.emplace_back(std::string("swap-") + homog::swap_mode_name(mode), [=] {
        const homog::CoefficientFamily fam = homog::make_coefficient_family(mode, 4, common.seed);
        return homog::swap_contradiction_demo(mode, integrand, fam, grid);
      });
    }
  }
  if (want("dominance")) {
    checks.emplace_back("dominance-quintic", [] {
      return homog::dominance_identity_check(
          homog::make_dominance_g(homog::quintic_smoothstep_cutoff()));
    });
    checks.emplace_back("dominance-linear-ramp", [] {
      return homog::dominance_identity_check(homog::make_dominance_g(homog::linear_ramp_cutoff()));
    });
  }
  if (want("lsc")) {
    checks.emplace_back("lsc-unit-square", [] { return homog::lsc_energy_check(1.0); });
    checks.emplace_back("lsc-double-rectangle", [] { return homog::lsc_energy_check(2.0); });
  }
  if (want("closing")) {
    checks.emplace_back("closing-identity",
                        [&] { return homog::closing_example_identity(samples, common.seed); });
  }

  for (const auto& c : checks) ctx.tasks.push_back({c.first});
  ctx.write_manifest("running");

  bool all_pass = true;
  std::string text;
  std::string csv = "task,report,clause,pass,margin\n";
  json structured = json::array();
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Stopwatch watch;
    const homog::VerificationReport rep = checks[i].second();
    ctx.tasks[i].seconds = watch.seconds();
    ctx.tasks[i].status = rep.overall() ? "ok" : "failed";
    all_pass = all_pass && rep.overall();

    if (!text.empty()) text += "\n";
    text += "# " + checks[i].first + "\n" + report_text(rep);
    report_csv(csv, checks[i].first, rep);
    structured.push_back({{"task", checks[i].first}, {"report", json::parse(homog::report_json(rep))}});
  }

  std::string out;
  if (common.format == "delimited")
    out = csv;
  else if (common.format == "structured")
    out = structured.dump(2) + "\n";
  else
    out = text;
  ctx.write_result(result_filename("verify", common.format), out);
  ctx.write_manifest("complete");
  return all_pass ? 0 : 1;
}

// -------------------------------------------------------------- qc-check ---

int run_qc_check(const std::string& model, const std::string& y_literal, int samples,
                 int directions, const CommonOpts& common) {
  const homog::Lagrangian L = lagrangian_for(model);
  const homog::Matrix Y = parse_Y(y_literal, L);
  const double x0[8] = {0.0};
  const std::vector<double> s0(static_cast<std::size_t>(L.N), 0.0);
  const auto density = [&](const homog::Matrix& A) { return L.eval(x0, s0.data(), A); };

  json echo;
  echo["model"] = model;
  echo["Y"] = homog::format_matrix(Y);
  echo["samples"] = samples;
  echo["directions"] = directions;
  echo["seed"] = common.seed;
  echo["format"] = common.format;

  RunContext ctx = make_context("qc-check", common.output_dir, echo);
  ctx.tasks.push_back({"quasiconvexity-probe"});
  ctx.tasks.push_back({"rank-one-probe"});
  ctx.write_manifest("running");

  Stopwatch w1;
  const double jensen = homog::quasiconvexity_probe(density, Y, samples, common.seed);
  ctx.tasks[0].seconds = w1.seconds();
  Stopwatch w2;
  const double rank_one = homog::rank_one_probe(density, Y, directions, common.seed);
  ctx.tasks[1].seconds = w2.seconds();

  const double tol = 1e-9;
  const bool pass = jensen >= -tol && rank_one >= -tol;
  ctx.tasks[0].status = jensen >= -tol ? "ok" : "failed";
  ctx.tasks[1].status = rank_one >= -tol ? "ok" : "failed";
  ctx.tasks[0].notes["min_gap"] = jensen;
  ctx.tasks[1].notes["min_second_difference"] = rank_one;

  std::string out;
  if (common.format == "delimited") {
    out = "probe,value,pass\n";
    out += "jensen_gap_min," + fmt(jensen) + "," + (jensen >= -tol ? "1" : "0") + "\n";
    out += "rank_one_min," + fmt(rank_one) + "," + (rank_one >= -tol ? "1" : "0") + "\n";
  } else if (common.format == "structured") {
    json j;
    j["model"] = model;
    j["Y"] = homog::format_matrix(Y);
    j["jensen_gap_min"] = jensen;
    j["rank_one_min"] = rank_one;
    j["pass"] = pass;
    out = j.dump(2) + "\n";
  } else {
    out = "qc-check\n";
    out += "model = " + model + "\n";
    out += "Y = " + homog::format_matrix(Y) + "\n";
    out += "jensen_gap_min = " + fmt(jensen) + "\n";
    out += "rank_one_min = " + fmt(rank_one) + "\n";
    out += std::string("pass = ") + yn(pass) + "\n";
  }
  ctx.write_result(result_filename("qc-check", common.format), out);
  ctx.write_manifest("complete");
  return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"periodic-energy homogenization estimates and impossibility checks"};
  app.set_config("--config", "", "flat key-value config file with [subcommand] sections");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  // homogenize
  std::string h_model, h_Y;
  std::vector<double> h_t;
  int h_res = 32;
  CommonOpts h_common;
  SolverOpts h_solver;
  CLI::App* hom = app.add_subcommand("homogenize", "estimate the effective density over a t schedule");
  hom->configurable(true);
  hom->add_option("--model", h_model, "built-in model id or quadratic-form file")->required();
  hom->add_option("--Y", h_Y, "slope matrix literal, rows ';'-separated");
  hom->add_option("--t", h_t, "cube side schedule")->delimiter(',');
  hom->add_option("--resolution", h_res, "grid cells per unit length");
  add_solver(hom, h_solver);
  add_common(hom, h_common);

  // cell
  std::string c_model, c_Y;
  double c_t = 1.0;
  int c_res = 32;
  CommonOpts c_common;
  SolverOpts c_solver;
  CLI::App* cell = app.add_subcommand("cell", "solve a single cell problem");
  cell->configurable(true);
  cell->add_option("--model", c_model, "built-in model id or quadratic-form file")->required();
  cell->add_option("--Y", c_Y, "slope matrix literal");
  cell->add_option("--t", c_t, "cube side");
  cell->add_option("--resolution", c_res, "grid cells per unit length");
  add_solver(cell, c_solver);
  add_common(cell, c_common);

  // epsilon-sweep
  std::string e_model, e_Y;
  std::vector<double> e_eps, e_t;
  int e_res = 32;
  CommonOpts e_common;
  SolverOpts e_solver;
  CLI::App* sweep = app.add_subcommand("epsilon-sweep",
                                       "compare shrinking-oscillation minima with the t-limit");
  sweep->configurable(true);
  sweep->add_option("--model", e_model, "built-in model id or quadratic-form file")->required();
  sweep->add_option("--Y", e_Y, "slope matrix literal");
  sweep->add_option("--epsilon", e_eps, "decreasing oscillation scales")->delimiter(',');
  sweep->add_option("--t", e_t, "reference cube side schedule")->delimiter(',');
  sweep->add_option("--resolution", e_res, "grid cells per unit length");
  add_solver(sweep, e_solver);
  add_common(sweep, e_common);

  // tiling
  long long t_t = 2, t_s = 13;
  int t_m = 2;
  std::string t_Y;
  CommonOpts t_common;
  CLI::App* til = app.add_subcommand("tiling", "build and verify a block tiling");
  til->configurable(true);
  til->add_option("--t", t_t, "inner block side");
  til->add_option("--s", t_s, "outer cube side");
  til->add_option("--m", t_m, "dimension");
  til->add_option("--Y", t_Y, "slope matrix for the lattice shifts");
  add_common(til, t_common);

  // verify
  std::string v_suite = "all";
  int v_samples = 1000;
  CommonOpts v_common;
  CLI::App* ver = app.add_subcommand("verify", "run the impossibility verification suite");
  ver->configurable(true);
  ver->add_option("--suite", v_suite,
                  "all, products, parity, relative-density, swap, dominance, lsc, closing");
  ver->add_option("--samples", v_samples, "sample count for the identity checks");
  add_common(ver, v_common);

  // qc-check
  std::string q_model, q_Y;
  int q_samples = 200, q_directions = 64;
  CommonOpts q_common;
  CLI::App* qc = app.add_subcommand("qc-check", "probe quasiconvexity and rank-one convexity");
  qc->configurable(true);
  qc->add_option("--model", q_model, "built-in model id or quadratic-form file")->required();
  qc->add_option("--Y", q_Y, "slope matrix literal");
  qc->add_option("--samples", q_samples, "test fields for the Jensen probe");
  qc->add_option("--directions", q_directions, "rank-one directions");
  add_common(qc, q_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (hom->parsed()) return run_homogenize(h_model, h_Y, h_t, h_res, h_solver, h_common);
    if (cell->parsed()) return run_cell(c_model, c_Y, c_t, c_res, c_solver, c_common);
    if (sweep->parsed())
      return run_epsilon_sweep(e_model, e_Y, e_eps, e_t, e_res, e_solver, e_common);
    if (til->parsed()) return run_tiling(t_t, t_s, t_m, t_Y, t_common);
    if (ver->parsed()) return run_verify(v_suite, v_samples, v_common);
    if (qc->parsed()) return run_qc_check(q_model, q_Y, q_samples, q_directions, q_common);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  std::fprintf(stderr, "error: no subcommand selected\n");
  return 2;
}
