#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cexplore/commands.hpp"
#include "cexplore/service.hpp"

using namespace cexplore;

namespace {

void add_problem_flags(CLI::App* cmd, ProblemSpec& spec, std::string& prop_file, std::string& mode) {
  cmd->add_option("--model", spec.model_path, "model file (.egs)")->required();
  auto* prop = cmd->add_option("--prop", spec.property, "property name or formula");
  auto* file = cmd->add_option("--prop-file", prop_file, "file holding the property formula");
  prop->excludes(file);
  cmd->add_option("--bound", spec.bound, "maximum lasso length")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", mode, "ce or witness")->check(CLI::IsMember({"ce", "witness"}));
  cmd->add_flag("--add-idle", spec.add_idle, "add an Idle self-loop to deadlocked states");
  cmd->add_option("--jobs", spec.jobs, "concurrent queries per enabled-types call")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-timing", [&spec](std::int64_t) { spec.timing = false; }, "print '-' instead of times");
}

bool finish_problem(ProblemSpec& spec, const std::string& prop_file, const std::string& mode) {
  spec.mode = mode == "witness" ? Mode::witness : Mode::counterexample;
  if (!prop_file.empty()) {
    std::ifstream in(prop_file);
    if (!in) {
      std::cerr << "error: cannot read " << prop_file << "\n";
      return false;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    spec.property = buf.str();
  }
  if (spec.property.empty()) {
    std::cerr << "error: one of --prop or --prop-file is required\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counter-example exploration for typed Kripke structures"};
  app.require_subcommand(1);

  ProblemSpec spec;
  std::string prop_file;
  std::string mode = "ce";
  std::string script_path;
  std::string csv_path;
  int port = 8080;
  std::string host = "127.0.0.1";
  ManagerOptions mopts;

  auto* check = app.add_subcommand("check", "check a property within the bound");
  add_problem_flags(check, spec, prop_file, mode);

  auto* explore = app.add_subcommand("explore", "replay an exploration script");
  add_problem_flags(explore, spec, prop_file, mode);
  explore->add_option("--script", script_path, "script file ('-' for stdin)");

  auto* bench = app.add_subcommand("bench", "time enabled-type queries along the first counter-example");
  add_problem_flags(bench, spec, prop_file, mode);
  bench->add_option("--csv", csv_path, "also write the table as CSV");

  auto* serve = app.add_subcommand("serve", "run the JSON session service");
  serve->add_option("--port", port, "listen port");
  serve->add_option("--host", host, "listen address");
  serve->add_option("--jobs", mopts.jobs, "concurrent queries per enabled-types call")->check(CLI::PositiveNumber);
  serve->add_option("--max-queries", mopts.max_queries, "process-wide cap on concurrent queries")
      ->check(CLI::PositiveNumber);
  serve->add_flag("--strict-type-switch", mopts.strict_type_switch, "keep earlier exclusions at the focus on type switch");

  CLI11_PARSE(app, argc, argv);

  try {
    if (serve->parsed()) {
      SessionManager manager(mopts);
      HttpServer server(manager);
      int bound_port = server.bind(host, port);
      std::cerr << "listening on " << host << ":" << bound_port << "\n";
      server.run();
      return 0;
    }
    if (!finish_problem(spec, prop_file, mode)) return kExitError;
    if (check->parsed()) return cmd_check(spec, std::cout, std::cerr);
    if (bench->parsed()) {
      return cmd_bench(spec, csv_path.empty() ? std::nullopt : std::optional(csv_path), std::cout, std::cerr);
    }
    if (script_path.empty() || script_path == "-") {
      std::istringstream none;
      return cmd_explore(spec, script_path.empty() ? static_cast<std::istream&>(none) : std::cin, std::cout,
                         std::cerr);
    }
    std::ifstream script(script_path);
    if (!script) {
      std::cerr << "error: cannot read " << script_path << "\n";
      return kExitError;
    }
    return cmd_explore(spec, script, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
