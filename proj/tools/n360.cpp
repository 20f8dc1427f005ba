#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "n360/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = n360::cli;
  CLI::App app{"Compile and inspect branching narratives for 360 video"};
  app.require_subcommand(1);

  cli::CompileArgs compile;
  std::string config, report;
  auto* c = app.add_subcommand("compile", "Compile a project manifest into a branch graph");
  c->add_option("manifest", compile.manifest, "Project manifest")->required();
  c->add_option("--config", config, "Flat JSON config overriding pipeline constants");
  c->add_option("--out", compile.out, "Graph output path")->capture_default_str();
  c->add_option("--report", report, "Report output path (default: <out>.report.json)");
  c->add_option("--jobs", compile.jobs, "Worker threads")->capture_default_str();

  std::string validate_path;
  auto* v = app.add_subcommand("validate", "Check a graph document");
  v->add_option("graph", validate_path, "Graph document")->required();

  std::string inspect_path;
  std::optional<int> inspect_scene;
  auto* i = app.add_subcommand("inspect", "Summarize a graph document");
  i->add_option("graph", inspect_path, "Graph document")->required();
  i->add_option("--scene", inspect_scene, "Only this scene (1-based)");

  cli::SimulateArgs sim;
  std::string script, sim_out;
  auto* s = app.add_subcommand("simulate", "Play a graph through under a choice policy");
  s->add_option("graph", sim.graph, "Graph document")->required();
  s->add_option("--policy", sim.policy, "default_only | script | social_argmax")->capture_default_str();
  s->add_option("--script", script, "JSON choice script or a previous trace");
  s->add_option("--out", sim_out, "Write the trace here instead of stdout");

  std::string eval_a, eval_b;
  double tol = n360::kDefaultTimingTolerance;
  auto* e = app.add_subcommand("eval-timing", "Jaccard agreement of two branching-point lists");
  e->add_option("a", eval_a, "Graph document or timestamp list")->required();
  e->add_option("b", eval_b, "Graph document or timestamp list")->required();
  e->add_option("--tol", tol, "Equivalence tolerance in seconds")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : cli::kInputError;
  }

  if (*c) {
    if (!config.empty()) compile.config = config;
    if (!report.empty()) compile.report = report;
    return cli::cmd_compile(compile, std::cout, std::cerr);
  }
  if (*v) return cli::cmd_validate(validate_path, std::cout, std::cerr);
  if (*i) return cli::cmd_inspect(inspect_path, inspect_scene, std::cout, std::cerr);
  if (*s) {
    if (!script.empty()) sim.script = script;
    if (!sim_out.empty()) sim.out = sim_out;
    return cli::cmd_simulate(sim, std::cout, std::cerr);
  }
  return cli::cmd_eval_timing(eval_a, eval_b, tol, std::cout, std::cerr);
}
