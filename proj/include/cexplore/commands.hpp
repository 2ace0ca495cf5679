#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cexplore/egs.hpp"
#include "cexplore/explorer.hpp"

namespace cexplore {

// Exit statuses of the batch commands.
inline constexpr int kExitValid = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitError = 2;

struct ProblemSpec {
  std::string model_path;
  std::string property;  // declared property name or formula text
  std::size_t bound = 10;
  Mode mode = Mode::counterexample;
  bool add_idle = false;
  std::size_t jobs = 1;
  bool timing = true;  // false: print "-" for every time
};

struct Problem {
  EventSystem sys;
  std::shared_ptr<const TypedLks> lks;
  BoundFormula phi;
};

// Throws std::runtime_error (unreadable file), ModelError, ParseError or
// UnknownAtom.
Problem load_problem(const ProblemSpec& spec);

// One line per problem, "file:line:col: Code: message" style.
std::string describe_error(const std::exception& e, const std::string& model_path);

// Valid-within-bound or the counter-example as a numbered listing.
int cmd_check(const ProblemSpec& spec, std::ostream& out, std::ostream& err);

// Script: one op per line or ';'-separated: fwd | back | alt-state |
// alt-event | type <name> | enabled. '#' starts a comment. The transcript
// carries no timings. Exit 0, or 2 when the script had an unknown op or
// there is no session to explore.
int cmd_explore(const ProblemSpec& spec, std::istream& script, std::ostream& out, std::ostream& err);

struct BenchRow {
  std::size_t index = 0;
  double total_ms = 0;
  std::vector<std::string> enabled;
  std::string executed;
};

struct BenchReport {
  std::string configuration;
  std::size_t states = 0;
  bool holds = false;
  double initial_ms = 0;
  std::vector<BenchRow> rows;
};

// First counter-example, then enabled types at every position of it.
BenchReport run_bench(const Problem& problem, std::size_t bound, Mode mode, std::size_t jobs);
void write_bench_table(const BenchReport& report, std::ostream& out, bool timing);
// Columns i, T_i_ms, enabled_types (';'-joined), executed_type.
void write_bench_csv(const BenchReport& report, std::ostream& out, bool timing);

int cmd_bench(const ProblemSpec& spec, const std::optional<std::string>& csv_path, std::ostream& out, std::ostream& err);

}  // namespace cexplore
