#include "cexplore/commands.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "cexplore/checker.hpp"
#include "cexplore/formula_parser.hpp"

namespace cexplore {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string valuation(const TypedLks& lks, StateId s) {
  std::string out = lks.state_name(s) + " {";
  bool first = true;
  for (PropId p : lks.label(s)) {
    if (!first) out += ' ';
    out += lks.prop_name(p);
    first = false;
  }
  return out + "}";
}

std::string event_text(const TypedLks& lks, EventId e) {
  return lks.event_name(e) + " : " + lks.type_name(lks.type_of(e));
}

std::string ms(double v, bool timing) {
  if (!timing) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << v;
  return s.str();
}

void write_lasso(const TypedLks& lks, const Lasso& pi, std::ostream& out, std::optional<std::size_t> focus = {}) {
  for (std::size_t j = 0; j < pi.size(); ++j) {
    out << (focus == j ? " >" : "  ") << std::setw(3) << j << "  " << valuation(lks, pi.states[j]);
    if (j == pi.loop_start) out << "  <- loop start";
    out << "\n        " << event_text(lks, pi.events[j]) << "\n";
  }
  out << "        -> " << pi.loop_start << "\n";
}

void write_focus(const Session& s, std::ostream& out) {
  const Lasso& pi = s.state().pi;
  std::size_t i = s.state().focus;
  std::size_t j = lasso_position(pi, i);
  out << "focus " << i;
  if (j != i) out << " (position " << j << ")";
  out << ": " << valuation(s.lks(), pi.states[j]) << " --" << event_text(s.lks(), pi.events[j]) << "--> "
      << valuation(s.lks(), pi.states[pi.successor(j)]) << "\n";
}

void write_enabled(const Session& s, std::ostream& out) {
  out << "enabled:";
  for (const TypeAvailability& t : s.enabled_types()) {
    out << ' ' << s.lks().type_name(t.type) << '=' << (t.enabled ? "yes" : "no");
  }
  out << "\n";
}

std::vector<std::string> script_ops(std::istream& in) {
  std::vector<std::string> ops;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream parts(line);
    std::string part;
    while (std::getline(parts, part, ';')) {
      auto b = part.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      auto e = part.find_last_not_of(" \t\r");
      ops.push_back(part.substr(b, e - b + 1));
    }
  }
  return ops;
}

}  // namespace

Problem load_problem(const ProblemSpec& spec) {
  EventSystem sys = parse_model(read_file(spec.model_path));
  CompileOptions opts;
  opts.add_idle = spec.add_idle;
  auto lks = std::make_shared<const TypedLks>(compile_lks(sys, opts));
  BoundFormula phi = resolve_property(sys, *lks, spec.property);
  return Problem{std::move(sys), std::move(lks), std::move(phi)};
}

std::string describe_error(const std::exception& e, const std::string& model_path) {
  if (const auto* m = dynamic_cast<const ModelError*>(&e)) {
    std::ostringstream s;
    s << model_path;
    if (m->location()) s << ':' << m->location()->line << ':' << m->location()->column;
    s << ": " << to_string(m->code()) << ": " << m->message();
    for (const std::string& st : m->states()) s << "\n  " << st;
    return s.str();
  }
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    std::ostringstream s;
    s << "property:" << p->location().line << ':' << p->location().column << ": SyntaxError: " << p->message();
    return s.str();
  }
  return std::string("error: ") + e.what();
}

int cmd_check(const ProblemSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    Problem p = load_problem(spec);
    BoundFormula checked = spec.mode == Mode::witness ? !p.phi : p.phi;
    CheckResult r = find_counterexample(*p.lks, checked, spec.bound);
    out << "model " << p.lks->name() << ": " << p.lks->num_states() << " states, " << p.lks->num_events()
        << " events, " << p.lks->num_types() << " types\n";
    out << "time: " << ms(r.stats.query_ms, spec.timing) << " ms\n";
    const char* what = spec.mode == Mode::witness ? "witness" : "counter-example";
    if (r.valid()) {
      out << (spec.mode == Mode::witness ? "no witness" : "valid") << " within bound " << spec.bound << "\n";
      return kExitValid;
    }
    out << what << " of length " << r.counterexample->size() << ", loop back to " << r.counterexample->loop_start
        << "\n";
    write_lasso(*p.lks, *r.counterexample, out);
    return kExitCounterexample;
  } catch (const std::exception& e) {
    err << describe_error(e, spec.model_path) << "\n";
    return kExitError;
  }
}

int cmd_explore(const ProblemSpec& spec, std::istream& script, std::ostream& out, std::ostream& err) {
  std::optional<Session> session;
  try {
    Problem p = load_problem(spec);
    auto started = Session::start(p.lks, p.phi, spec.bound, spec.mode, ExplorerOptions{spec.jobs});
    if (auto* holds = std::get_if<PropertyHolds>(&started)) {
      out << (spec.mode == Mode::witness ? "no witness" : "valid") << " within bound " << holds->bound << "\n";
    } else {
      session.emplace(std::move(std::get<Session>(started)));
    }
  } catch (const std::exception& e) {
    err << describe_error(e, spec.model_path) << "\n";
    return kExitError;
  }

  int status = kExitValid;
  if (session) {
    out << "trace:\n";
    write_lasso(session->lks(), session->state().pi, out, session->state().focus);
    write_focus(*session, out);
  }
  for (const std::string& op : script_ops(script)) {
    out << "> " << op << "\n";
    if (!session) {
      out << "error: no session to explore\n";
      status = kExitError;
      continue;
    }
    Session& s = *session;
    Lasso before = s.state().pi;
    std::optional<OpResult> r;
    try {
      if (op == "fwd") {
        s.forward();
      } else if (op == "back") {
        s.backward();
      } else if (op == "alt-state") {
        r = s.alt_state();
      } else if (op == "alt-event") {
        r = s.alt_event();
      } else if (op.rfind("type", 0) == 0 && op.size() > 4 && (op[4] == ' ' || op[4] == '\t')) {
        std::string name = op.substr(op.find_first_not_of(" \t", 4));
        auto t = s.lks().find_type(name);
        if (!t) {
          out << "error: unknown event type '" << name << "'\n";
          status = kExitError;
          continue;
        }
        r = s.set_type(*t);
      } else if (op == "enabled") {
        write_enabled(s, out);
        continue;
      } else {
        out << "error: unknown op '" << op << "'\n";
        status = kExitError;
        continue;
      }
    } catch (const BoundaryError& e) {
      out << "BoundaryError: " << e.what() << "\n";
      continue;
    }
    if (r && r->status == OpStatus::no_alternative) out << "NoAlternative\n";
    if (!(s.state().pi == before)) {
      out << "trace:\n";
      write_lasso(s.lks(), s.state().pi, out, lasso_position(s.state().pi, s.state().focus));
    }
    write_focus(s, out);
  }
  return status;
}

BenchReport run_bench(const Problem& problem, std::size_t bound, Mode mode, std::size_t jobs) {
  BenchReport report;
  report.configuration = problem.lks->name();
  report.states = problem.lks->num_states();
  auto started = Session::start(problem.lks, problem.phi, bound, mode, ExplorerOptions{jobs});
  if (auto* holds = std::get_if<PropertyHolds>(&started)) {
    report.holds = true;
    report.initial_ms = holds->stats.query_ms;
    return report;
  }
  Session& s = std::get<Session>(started);
  report.initial_ms = s.initial_stats().query_ms;
  const std::size_t n = s.state().pi.size();
  for (std::size_t i = 0; i < n; ++i) {
    BenchRow row;
    row.index = i;
    for (const TypeAvailability& t : s.enabled_types()) {
      row.total_ms += t.query_ms;
      if (t.enabled) row.enabled.push_back(s.lks().type_name(t.type));
    }
    row.executed = s.lks().type_name(s.lks().type_of(s.focused().event));
    report.rows.push_back(std::move(row));
    s.forward();
  }
  return report;
}

void write_bench_table(const BenchReport& report, std::ostream& out, bool timing) {
  out << "C " << report.configuration << " (" << report.states << " states)\n";
  out << "T " << ms(report.initial_ms, timing) << " ms\n";
  if (report.holds) {
    out << "no counter-example within bound\n";
    return;
  }
  out << std::left << std::setw(5) << "i" << std::setw(12) << "T_i (ms)"
      << "a_i (executed marked *)\n";
  for (const BenchRow& row : report.rows) {
    out << std::setw(5) << row.index << std::setw(12) << ms(row.total_ms, timing);
    for (std::size_t k = 0; k < row.enabled.size(); ++k) {
      if (k) out << ' ';
      out << row.enabled[k] << (row.enabled[k] == row.executed ? "*" : "");
    }
    out << "\n";
  }
  out << std::right;
}

void write_bench_csv(const BenchReport& report, std::ostream& out, bool timing) {
  out << "i,T_i_ms,enabled_types,executed_type\n";
  for (const BenchRow& row : report.rows) {
    out << row.index << ',' << ms(row.total_ms, timing) << ',';
    for (std::size_t k = 0; k < row.enabled.size(); ++k) out << (k ? ";" : "") << row.enabled[k];
    out << ',' << row.executed << "\n";
  }
}

int cmd_bench(const ProblemSpec& spec, const std::optional<std::string>& csv_path, std::ostream& out,
              std::ostream& err) {
  try {
    Problem p = load_problem(spec);
    BenchReport report = run_bench(p, spec.bound, spec.mode, spec.jobs);
    write_bench_table(report, out, spec.timing);
    if (csv_path && !report.holds) {
      std::ofstream csv(*csv_path, std::ios::binary);
      if (!csv) throw std::runtime_error("cannot write " + *csv_path);
      write_bench_csv(report, csv, spec.timing);
    }
    return kExitValid;
  } catch (const std::exception& e) {
    err << describe_error(e, spec.model_path) << "\n";
    return kExitError;
  }
}

}  // namespace cexplore
