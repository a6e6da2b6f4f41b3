#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sepnet/sepnet.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + SEPNET_CLI + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(SEPNET_DATA_DIR) + "/" + name; }

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("sepnet_cli_" + std::to_string(getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
};

TEST_F(Cli, Validate) {
  auto ok = run("validate " + data("john.net"));
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("valid\n"), std::string::npos);
  auto bad = run("validate " + data("cyclic.net"));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("violation cycle"), std::string::npos);
  EXPECT_EQ(run("validate " + (dir / "missing.net").string()).code, 2);
  std::ofstream(dir / "broken.net") << "variables { A : preference {a b} }";
  EXPECT_EQ(run("validate " + (dir / "broken.net").string()).code, 2);
}

TEST_F(Cli, Optimal) {
  auto r = run("optimal " + data("john_ascii.net") + " --scenario S=a_bar");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "a_bar,o,c\n");
  EXPECT_EQ(run("optimal " + data("john_ascii.net")).code, 2);
  EXPECT_EQ(run("optimal " + data("john_ascii.net") + " -s S=nowhere").code, 2);
  EXPECT_EQ(run("optimal " + data("cyclic.net")).code, 1);
  EXPECT_EQ(run("optimal " + data("queue.net") + " -s location=Deli").code, 2);
}

TEST_F(Cli, Dominance) {
  auto r = run("dominance " + data("john_ascii.net") + " a,o,c_bar S=a,T=o_bar,P=c");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "DOMINATES\n"
            "a,o,c_bar -> a,o_bar,c_bar T worsening\n"
            "a,o_bar,c_bar -> a,o_bar,c P worsening\n");
  EXPECT_EQ(run("dominance " + data("john_ascii.net") + " a,o a,o,c").code, 2);
}

TEST_F(Cli, OrderFormatsAndCap) {
  auto csv = run("order " + data("john_ascii.net") + " --format csv");
  EXPECT_EQ(csv.code, 0);
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 9);
  auto dot_path = dir / "john.dot";
  EXPECT_EQ(run("order " + data("john_ascii.net") + " --dot " + dot_path.string()).code, 0);
  auto dot = read(dot_path);
  EXPECT_EQ(dot.find("digraph \"S=a\""), 0u);
  EXPECT_NE(dot.find("digraph \"S=a_bar\""), std::string::npos);
  auto jl = run("order " + data("john_sep.net") + " --format json-lines");
  EXPECT_EQ(jl.code, 0);
  EXPECT_EQ(jl.out.find("{\"type\":\"component\""), 0u);
  auto sep = run("order " + data("queue.net") + " --format csv");
  EXPECT_EQ(sep.code, 0);
  EXPECT_EQ(run("order " + data("john_ascii.net"), "SEPNET_CAP=3").code, 3);
  EXPECT_EQ(run("--cap 3 order " + data("john_ascii.net")).code, 3);
  EXPECT_EQ(run("order " + data("john_ascii.net") + " --format svg").code, 2);
}

TEST_F(Cli, Consistent) {
  EXPECT_EQ(run("consistent " + data("john.net")).out, "consistent\n");
  auto r = run("consistent " + data("cyclic.net"));
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.find("inconsistent\n"), 0u);
}

TEST_F(Cli, SepOptimal) {
  auto one = run("sep-optimal " + data("queue.net") + " -s location=Deli");
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(one.out, "scenario.location,eval.likelihood,pref.judgment\nDeli,62,no\n");
  auto all = run("sep-optimal " + data("queue.net") + " --all");
  EXPECT_EQ(all.code, 1);
  EXPECT_EQ(all.out, "scenario.location,eval.likelihood,pref.judgment\nDeli,62,no\nAirport,80,yes\n");
  EXPECT_EQ(run("sep-optimal " + data("queue.net") + " -s location=Bathroom").code, 1);
  EXPECT_EQ(run("sep-optimal " + data("queue.net") + " -s location=Bathroom --tie-break").code, 0);
  EXPECT_EQ(run("sep-optimal " + data("queue.net")).code, 2);
}

TEST_F(Cli, GenerateAndLearn) {
  auto csv = dir / "survey.csv";
  ASSERT_EQ(run("generate --model mimic --subjects 40 --seed 3 -o " + csv.string()).code, 0);
  auto report = dir / "report";
  auto r = run("learn " + csv.string() + " --report-dir " + report.string() + " --jobs 2");
  ASSERT_EQ(r.code, 0);
  for (const char* f : {"order_effects.csv", "order_tests.csv", "correlations.csv", "location_evaluation.csv",
                        "location_judgment.csv", "tests.csv", "edges.csv", "learned.net", "manifest.json"})
    EXPECT_TRUE(fs::exists(report / f)) << f;
  auto m = sepnet::manifest_from_json(read(report / "manifest.json"));
  EXPECT_EQ(m.command, "learn");
  EXPECT_EQ(m.inputs.at(0).fnv1a, sepnet::fnv1a_hex(read(csv)));
  EXPECT_EQ(m.flags.at("jobs"), "2");
  EXPECT_EQ(run("validate " + (report / "learned.net").string()).code, 0);
  EXPECT_EQ(read(report / "location_evaluation.csv").rfind("Scenario,Deli-Bath,Deli-Airpt,Airpt-Bath\n", 0), 0u);
}

TEST_F(Cli, LearnStopsOnOrderEffects) {
  auto m = sepnet::null_model();
  m.eval_first_logit[0] = 4.0;
  auto csv = dir / "ordered.csv";
  std::ofstream(csv) << sepnet::to_csv(sepnet::generate_survey(m, {60, 2}));
  auto report = dir / "report";
  EXPECT_EQ(run("learn " + csv.string() + " --report-dir " + report.string()).code, 1);
  EXPECT_TRUE(fs::exists(report / "order_effects.csv"));
  EXPECT_FALSE(fs::exists(report / "learned.net"));
  EXPECT_EQ(run("learn " + csv.string() + " --force-pool --report-dir " + report.string()).code, 0);
  EXPECT_TRUE(fs::exists(report / "learned.net"));
  EXPECT_EQ(run("screen " + csv.string()).code, 1);
}

TEST_F(Cli, InputErrors) {
  std::ofstream(dir / "bad.csv") << "subject_id,order\n";
  EXPECT_EQ(run("learn " + (dir / "bad.csv").string() + " --report-dir " + dir.string()).code, 2);
  EXPECT_EQ(run("learn " + (dir / "nope.csv").string()).code, 2);
  EXPECT_EQ(run("learn x.csv --alpha 2").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

}  // namespace
