#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("newtonc_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }

  CliRun run(const std::string& args, const std::string& env = "") {
    const auto err_path = dir_ / "stderr.txt";
    const std::string cmd = env + " '" + std::string(NEWTONC_PATH) + "' " + args + " 2>'" + err_path.string() + "'";
    CliRun r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(err_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.err = ss.str();
    return r;
  }

  static std::string fixture(const std::string& name) { return "'" + newton::testing::fixture_path(name) + "'"; }

  static std::vector<json> json_lines(const std::string& text) {
    std::vector<json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(json::parse(line));
    return out;
  }

  fs::path dir_;
};

const std::string kPendulumSamples =
    "{\"L\": 9.8, \"period\": 6.28}\n{\"L\": 9.8, \"period\": 7.5}\n{\"L\": 2.45, \"period\": 3.14}\n";

TEST_F(Cli, CheckPendulum) {
  const auto r = run("check " + fixture("pendulum.newton"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "OK: 3 signals, 2 constants, 1 invariants\n");
  EXPECT_EQ(r.err, "");
}

TEST_F(Cli, CheckDistanceSpeed) {
  const auto r = run("check " + fixture("distance_speed.newton"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "OK: 3 signals, 0 constants, 0 invariants\n");
}

TEST_F(Cli, CheckEmptyFile) {
  const auto r = run("check '" + write("empty.newton", "") + "'");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "OK: 0 signals, 0 constants, 0 invariants\n");
}

TEST_F(Cli, CheckMismatch) {
  std::string text = newton::testing::read_fixture("pendulum.newton");
  text.replace(text.find("period ~ 2*Pi*((L/g)**(1/2))"), 28, "period ~ L");
  const auto r = run("check '" + write("bad.newton", text) + "'");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.out, "");
  EXPECT_NE(r.err.find("dimension mismatch"), std::string::npos) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  const auto j = run("check --json '" + dir_.string() + "/bad.newton'");
  const auto doc = json::parse(j.out);
  EXPECT_EQ(doc["ok"], false);
  ASSERT_EQ(doc["diagnostics"].size(), 1u);
  EXPECT_EQ(doc["diagnostics"][0]["kind"], "dimension mismatch");
  EXPECT_EQ(doc["diagnostics"][0]["line"], 23);
}

TEST_F(Cli, MissingFile) {
  const auto r = run("check '" + (dir_ / "nope.newton").string() + "'");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(r.out, "");
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("frobnicate x").exit_code, 2);
  EXPECT_EQ(run("eval " + fixture("pendulum.newton") + " pendulum x --rel-tol -1").exit_code, 2);
}

TEST_F(Cli, Pi) {
  const auto r = run("pi " + fixture("pendulum.newton") + " pendulum");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "n=3 k=2\npi_0 = period^2 * g * L^-1\n");
  const auto nc = run("pi --no-constants " + fixture("pendulum.newton") + " pendulum");
  EXPECT_EQ(nc.exit_code, 0);
  EXPECT_EQ(nc.out, "n=2 k=2\n");
  EXPECT_EQ(run("pi " + fixture("pendulum.newton") + " nothing").exit_code, 1);
}

TEST_F(Cli, PiDimensionless) {
  const auto spec = write("r.newton",
                          "time : signal = { derivation = none; }\n"
                          "ratio : signal = { derivation = time / time; }\n"
                          "r : invariant(a: ratio, b: ratio) = { a ~ b }\n");
  const auto r = run("pi '" + spec + "' r");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "n=2 k=0\npi_0 = a\npi_1 = b\n");
}

TEST_F(Cli, EvalStream) {
  const auto samples = write("s.jsonl", kPendulumSamples);
  const auto r = run("eval " + fixture("pendulum.newton") + " pendulum '" + samples + "'");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.err, "checked=3 passed=2 failed=1\n");
  const auto lines = json_lines(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0]["pass"], true);
  EXPECT_EQ(lines[1]["pass"], false);
  EXPECT_EQ(lines[2]["pass"], true);
}

TEST_F(Cli, EvalFromStdinAndCsv) {
  const auto samples = write("s.jsonl", "{\"L\": 9.8, \"period\": 6.28}\n");
  const auto r = run("eval " + fixture("pendulum.newton") + " pendulum - < '" + samples + "'");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.err, "checked=1 passed=1 failed=0\n");
  const auto csv = write("s.csv", "L,period\n9.8,6.28\n9.8,6.5\n");
  const auto c = run("eval " + fixture("pendulum.newton") + " pendulum '" + csv + "'");
  EXPECT_EQ(c.exit_code, 1);
  EXPECT_EQ(c.err, "checked=2 passed=1 failed=1\n");
  const auto loose = run("eval --rel-tol 0.05 " + fixture("pendulum.newton") + " pendulum '" + csv + "'");
  EXPECT_EQ(loose.exit_code, 0);
}

TEST_F(Cli, EvalEmptyAndMalformed) {
  const auto empty = run("eval " + fixture("pendulum.newton") + " pendulum '" + write("e.jsonl", "") + "'");
  EXPECT_EQ(empty.exit_code, 0);
  EXPECT_EQ(empty.out, "");
  EXPECT_EQ(empty.err, "checked=0 passed=0 failed=0\n");
  const auto bad = run("eval " + fixture("pendulum.newton") + " pendulum '" + write("b.jsonl", "{\"L\": }\n") + "'");
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_EQ(bad.out, "");
}

TEST_F(Cli, EvalMissingKeyContinues) {
  const auto samples = write("s.jsonl", "{\"L\": 9.8}\n{\"L\": 9.8, \"period\": 6.28}\n");
  const auto r = run("eval " + fixture("pendulum.newton") + " pendulum '" + samples + "'");
  EXPECT_EQ(r.exit_code, 1);
  const auto lines = json_lines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0]["pass"], false);
  EXPECT_NE(lines[0]["relations"][0]["reason"].get<std::string>().find("period"), std::string::npos);
  EXPECT_EQ(lines[1]["pass"], true);
}

TEST_F(Cli, EmitIrMatchesGolden) {
  const auto r = run("emit-ir " + fixture("pendulum.newton"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, newton::testing::read_fixture("pendulum.ir.json"));
  const auto out_path = (dir_ / "out.json").string();
  EXPECT_EQ(run("emit-ir -o '" + out_path + "' " + fixture("pendulum.newton")).exit_code, 0);
  std::ifstream in(out_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), r.out);
  EXPECT_EQ(run("emit-ir -o - " + fixture("pendulum.newton")).out, r.out);
}

TEST_F(Cli, EmitIrInvalidWritesNothing) {
  const auto spec = write("bad.newton", "c : constant = q;\n");
  const auto out_path = dir_ / "out.json";
  const auto r = run("emit-ir -o '" + out_path.string() + "' '" + spec + "'");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_FALSE(fs::exists(out_path));
  EXPECT_EQ(run("emit-ir -o '" + (dir_ / "no/such/dir.json").string() + "' " + fixture("pendulum.newton")).exit_code,
            2);
}

TEST_F(Cli, Info) {
  const auto r = run("info " + fixture("pendulum.newton") + " pendulum");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("L"), std::string::npos);
  EXPECT_NE(r.out.find("period"), std::string::npos);
  EXPECT_EQ(run("info " + fixture("distance_speed.newton") + " speed").exit_code, 1);
}

TEST_F(Cli, JsonOutputsParse) {
  const auto samples = write("s.jsonl", kPendulumSamples);
  const std::vector<std::string> commands = {
      "check --json " + fixture("pendulum.newton"),
      "pi --json " + fixture("pendulum.newton") + " pendulum",
      "info --json " + fixture("pendulum.newton") + " pendulum",
      "eval --json " + fixture("pendulum.newton") + " pendulum '" + samples + "'",
      "emit-ir --json " + fixture("pendulum.newton"),
      "emit-ir --json " + fixture("distance_speed.newton"),
  };
  for (const auto& c : commands) {
    const auto r = run(c);
    ASSERT_LE(r.exit_code, 1) << c;
    ASSERT_FALSE(r.out.empty()) << c;
    EXPECT_NO_THROW(json_lines(r.out)) << c << "\n" << r.out;
  }
  const auto pi = json::parse(run("pi --json " + fixture("pendulum.newton") + " pendulum").out);
  EXPECT_EQ(pi["n"], 3);
  EXPECT_EQ(pi["k"], 2);
  EXPECT_EQ(pi["pi_groups"][0]["exponents"], json({{"L", -1}, {"g", 1}, {"period", 2}}));
}

TEST_F(Cli, StandardLibrary) {
  const auto spec = write("uses_std.newton",
                          "g : constant = 9.8*m*s**-2;\n"
                          "fall : invariant(h: length, t: time) = { h ~ g*t**2/2 }\n");
  EXPECT_EQ(run("check '" + spec + "'").exit_code, 1);
  const auto r = run("--stdlib check '" + spec + "'");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, "OK: 3 signals, 1 constants, 1 invariants\n");

  const auto alt = write("alt.newton",
                         "time : signal = { symbol = s; derivation = none; }\n"
                         "length : signal = { symbol = m; derivation = none; }\n");
  const auto a = run("--stdlib check '" + spec + "'", "NEWTON_STDLIB='" + alt + "'");
  EXPECT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(a.out, "OK: 2 signals, 1 constants, 1 invariants\n");
  EXPECT_EQ(run("--stdlib check '" + spec + "'", "NEWTON_STDLIB='" + (dir_ / "none").string() + "'").exit_code, 2);
}

}  // namespace
