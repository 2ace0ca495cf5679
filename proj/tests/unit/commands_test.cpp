#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cexplore/commands.hpp"

using namespace cexplore;

namespace {

ProblemSpec spec_for(const std::string& file, const std::string& prop, std::size_t bound = 10) {
  ProblemSpec spec;
  spec.model_path = std::string(CEXPLORE_MODELS_DIR) + "/" + file;
  spec.property = prop;
  spec.bound = bound;
  spec.timing = false;
  return spec;
}

struct Transcript {
  int status;
  std::string out;
  std::string err;
};

Transcript explore(const ProblemSpec& spec, const std::string& script) {
  std::istringstream in(script);
  std::ostringstream out, err;
  int status = cmd_explore(spec, in, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines_with(const std::string& text, const std::string& prefix) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(prefix, 0) == 0) out.push_back(line);
  }
  return out;
}

}  // namespace

TEST(CmdCheck, HotelCounterexample) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check(spec_for("hotel_2_3.egs", "BadSafety"), out, err), kExitCounterexample);
  const std::string text = out.str();
  auto in1 = text.find("In[g0,");
  auto out1 = text.find("Out[g0]");
  auto in2 = text.find("In[g1,");
  auto again = text.find("entry[g0,", in2);
  again = std::min(again, text.find("Entry[g0,", in2));
  ASSERT_NE(in1, std::string::npos) << text;
  EXPECT_LT(in1, out1);
  EXPECT_LT(out1, in2);
  EXPECT_NE(again, std::string::npos) << text;
  EXPECT_TRUE(err.str().empty());
}

TEST(CmdCheck, ValidAndErrors) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check(spec_for("toggle.egs", "F p", 6), out, err), kExitValid);
  EXPECT_NE(out.str().find("valid within bound 6"), std::string::npos);
  EXPECT_EQ(cmd_check(spec_for("toggle.egs", "EventuallyP", 6), out, err), kExitValid);
  EXPECT_EQ(cmd_check(spec_for("toggle.egs", "NeverP", 6), out, err), kExitCounterexample);

  std::ostringstream e1, e2, e3;
  EXPECT_EQ(cmd_check(spec_for("no_such_model.egs", "F p"), out, e1), kExitError);
  EXPECT_NE(e1.str().find("cannot read"), std::string::npos);
  EXPECT_EQ(cmd_check(spec_for("toggle.egs", "F (p"), out, e2), kExitError);
  EXPECT_NE(e2.str().find("property:1:"), std::string::npos) << e2.str();
  EXPECT_EQ(cmd_check(spec_for("toggle.egs", "G q"), out, e3), kExitError);
  EXPECT_NE(e3.str().find("q"), std::string::npos);
}

TEST(CmdCheck, MalformedModelReportsLocation) {
  auto path = std::filesystem::temp_directory_path() / "cexplore_bad.egs";
  std::ofstream(path) << "model Bad\nvar p: bool\ninit { p }\nevent e() modifies { guard: p effect: q' := true }\n";
  ProblemSpec spec;
  spec.model_path = path.string();
  spec.property = "G p";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check(spec, out, err), kExitError);
  EXPECT_NE(err.str().find(path.string() + ":4:"), std::string::npos) << err.str();
  std::filesystem::remove(path);
}

TEST(CmdExplore, EmptyScriptPrintsInitialTrace) {
  Transcript r = explore(spec_for("toggle.egs", "G !p", 4), "");
  EXPECT_EQ(r.status, kExitValid);
  EXPECT_EQ(r.out,
            "trace:\n"
            " >  0  s0 {}\n"
            "        setA[] : Set\n"
            "    1  s1 {p}  <- loop start\n"
            "        stay[] : Stay\n"
            "        -> 1\n"
            "focus 0: s0 {} --setA[] : Set--> s1 {p}\n");
}

TEST(CmdExplore, AltEventSwapsSetAForSetB) {
  Transcript r = explore(spec_for("toggle.egs", "G !p", 4), "enabled; alt-event; enabled");
  EXPECT_EQ(r.status, kExitValid);
  auto enabled = lines_with(r.out, "enabled:");
  ASSERT_EQ(enabled.size(), 2u);
  EXPECT_EQ(enabled[0], "enabled: Set=yes Stay=no Unset=no");
  EXPECT_EQ(enabled[0], enabled[1]);
  EXPECT_NE(r.out.find("focus 0: s0 {} --setB[] : Set--> s1 {p}"), std::string::npos) << r.out;
}

TEST(CmdExplore, BoundaryAndUnknownOps) {
  Transcript r = explore(spec_for("toggle.egs", "G !p", 4), "back\nfwd\ntype Unset\nfrobnicate\ntype Nope\nalt-event");
  EXPECT_EQ(r.status, kExitError);
  EXPECT_NE(r.out.find("> back\nBoundaryError"), std::string::npos);
  EXPECT_NE(r.out.find("error: unknown op 'frobnicate'"), std::string::npos);
  EXPECT_NE(r.out.find("error: unknown event type 'Nope'"), std::string::npos);
  EXPECT_NE(r.out.find("focus 1: s1 {p} --unset[] : Unset--> s0 {}"), std::string::npos) << r.out;
  // Only one Unset event exists at s1.
  EXPECT_NE(r.out.find("> alt-event\nNoAlternative"), std::string::npos) << r.out;
}

TEST(CmdExplore, NoSessionWhenPropertyHolds) {
  Transcript r = explore(spec_for("toggle.egs", "F p", 6), "fwd");
  EXPECT_EQ(r.status, kExitError);
  EXPECT_NE(r.out.find("valid within bound 6"), std::string::npos);
  EXPECT_NE(r.out.find("error: no session"), std::string::npos);
}

TEST(CmdExplore, WitnessMode) {
  ProblemSpec spec = spec_for("toggle.egs", "F p", 4);
  spec.mode = Mode::witness;
  Transcript r = explore(spec, "");
  EXPECT_EQ(r.status, kExitValid);
  EXPECT_NE(r.out.find("s1 {p}"), std::string::npos);
}

TEST(CmdBench, ToggleTable) {
  Problem p = load_problem(spec_for("toggle.egs", "G !p", 4));
  BenchReport report = run_bench(p, 4, Mode::counterexample, 2);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].enabled, (std::vector<std::string>{"Set"}));
  EXPECT_EQ(report.rows[0].executed, "Set");
  EXPECT_EQ(report.rows[1].enabled, (std::vector<std::string>{"Stay", "Unset"}));
  EXPECT_EQ(report.rows[1].executed, "Stay");
  std::ostringstream csv;
  write_bench_csv(report, csv, false);
  EXPECT_EQ(csv.str(), "i,T_i_ms,enabled_types,executed_type\n0,-,Set,Set\n1,-,Stay;Unset,Stay\n");
  std::ostringstream table;
  write_bench_table(report, table, false);
  EXPECT_NE(table.str().find("Stay* Unset"), std::string::npos) << table.str();
}

TEST(CmdBench, HotelExecutedTypeAlwaysEnabled) {
  Problem p = load_problem(spec_for("hotel_2_3.egs", "BadSafety"));
  BenchReport report = run_bench(p, 10, Mode::counterexample, 1);
  ASSERT_FALSE(report.rows.empty());
  EXPECT_EQ(report.rows[0].enabled, (std::vector<std::string>{"In"}));
  EXPECT_EQ(report.rows[0].executed, "In");
  for (const BenchRow& row : report.rows) {
    EXPECT_NE(std::find(row.enabled.begin(), row.enabled.end(), row.executed), row.enabled.end()) << row.index;
  }
}

TEST(CmdBench, HoldsWritesNoCsv) {
  auto path = std::filesystem::temp_directory_path() / "cexplore_bench_holds.csv";
  std::filesystem::remove(path);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_bench(spec_for("toggle.egs", "F p", 6), path.string(), out, err), kExitValid);
  EXPECT_NE(out.str().find("no counter-example"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(CmdBench, CsvIsDeterministicWithoutTiming) {
  auto dir = std::filesystem::temp_directory_path();
  std::string a = (dir / "cexplore_bench_a.csv").string();
  std::string b = (dir / "cexplore_bench_b.csv").string();
  std::ostringstream out, err;
  ProblemSpec spec = spec_for("hotel_2_3.egs", "BadSafety");
  spec.jobs = 3;
  ASSERT_EQ(cmd_bench(spec, a, out, err), kExitValid);
  spec.jobs = 1;
  ASSERT_EQ(cmd_bench(spec, b, out, err), kExitValid);
  auto slurp = [](const std::string& f) {
    std::ifstream in(f);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}
