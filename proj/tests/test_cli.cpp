#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "motqc/cli.hpp"
#include "motqc/trace.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "motqc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = motqc::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("motqc_test_" + name);
}

}  // namespace

TEST(Cli, Verify) {
  auto r = run({"verify", "--model", "fibonacci"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out).at("pass").get<bool>());
  r = run({"verify", "--model", "su2_k", "--k", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out).at("model"), "su2_4");
  EXPECT_EQ(run({"verify", "--model", "su2_7", "--format", "csv"}).code, 0);
  EXPECT_EQ(run({"verify", "--model-file", std::string(MOTQC_TEST_DATA) + "/malformed.model"}).code, 2);
  EXPECT_EQ(run({"verify", "--model-file", std::string(MOTQC_TEST_DATA) + "/perturbed_fibonacci.model"}).code, 1);
  EXPECT_EQ(run({"verify", "--model-file", std::string(MOTQC_TEST_DATA) + "/fibonacci.model"}).code, 0);
  EXPECT_EQ(run({"verify", "--model", "toric"}).code, 2);
  EXPECT_EQ(run({"verify", "--model", "fibonacci", "--format", "xml"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"teleport-stats"}).code, 2);  // seed is required
  EXPECT_EQ(run({"teleport-stats", "--seed", "1", "--trials", "0"}).code, 2);
  EXPECT_EQ(run({"braid-check", "--seed", "1", "--word", "s1 t2"}).code, 2);
  EXPECT_EQ(run({"braid-check", "--seed", "1", "--word", "s5", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"braid-check", "--seed", "1", "--word", "s1", "--charge", "nope"}).code, 2);
  EXPECT_EQ(run({"run", "--seed", "1", "--schedule", "/nonexistent/schedule.json"}).code, 2);
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("teleport-stats"), std::string::npos);
}

TEST(Cli, TeleportStatsJsonRoundTrip) {
  const auto r = run({"teleport-stats", "--model", "fibonacci", "--seed", "42", "--trials", "500"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const auto j = json::parse(r.out);
  // Recompute the summary from the per-trial rows.
  std::map<std::string, std::pair<long, long>> by_e;
  long ok = 0;
  double sum = 0.0;
  for (const auto& t : j.at("per_trial")) {
    ++ok;
    sum += t.at("attempts").get<int>();
    const auto& o = t.at("outcomes");
    for (std::size_t k = 0; k + 1 < o.size(); k += 2) {
      auto& slot = by_e[o[k].get<std::string>()];
      ++slot.first;
      slot.second += o[k + 1].get<std::string>() == "0";
    }
  }
  EXPECT_EQ(j.at("mean_attempts").get<double>(), sum / ok);
  for (const auto& row : j.at("success_by_e")) {
    const auto& cnt = by_e[row.at("e").get<std::string>()];
    EXPECT_EQ(row.at("attempts").get<long>(), cnt.first);
    EXPECT_EQ(row.at("successes").get<long>(), cnt.second);
    EXPECT_EQ(row.at("p_hat").get<double>(), static_cast<double>(cnt.second) / cnt.first);
  }
  for (const auto& t : j.at("tail")) {
    long above = 0;
    for (const auto& row : j.at("per_trial")) above += row.at("attempts").get<int>() > t.at("n").get<int>();
    EXPECT_EQ(t.at("empirical").get<double>(), static_cast<double>(above) / 500);
  }
}

TEST(Cli, TeleportStatsCsvRoundTrip) {
  const auto r = run({"teleport-stats", "--model", "ising", "--seed", "9", "--trials", "300", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trial,attempts,outcomes,trajectory_probability,phase_re,phase_im");
  double sum = 0.0;
  int rows = 0;
  while (std::getline(in, line) && !line.empty()) {
    std::istringstream fields(line);
    std::string trial, attempts;
    std::getline(fields, trial, ',');
    std::getline(fields, attempts, ',');
    EXPECT_EQ(std::stoi(trial), rows);
    sum += std::stoi(attempts);
    ++rows;
  }
  EXPECT_EQ(rows, 300);
  bool found = false;
  while (std::getline(in, line))
    if (line.rfind("mean_attempts,,", 0) == 0) {
      const auto value = line.substr(15, line.find(',', 15) - 15);
      EXPECT_EQ(motqc::parse_real(value), sum / rows);
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(Cli, TeleportStatsIsDeterministic) {
  const auto trace1 = temp_path("trace1.log"), trace2 = temp_path("trace2.log");
  const auto a = run({"teleport-stats", "--seed", "5", "--trials", "50", "--trace", trace1.string()});
  const auto b = run({"teleport-stats", "--seed", "5", "--trials", "50", "--trace", trace2.string()});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(slurp(trace1), slurp(trace2));
  EXPECT_FALSE(slurp(trace1).empty());
  const auto c = run({"teleport-stats", "--seed", "6", "--trials", "50"});
  EXPECT_NE(a.out, c.out);
  const auto single1 = run({"teleport-stats", "--seed", "5", "--trials", "1"});
  const auto single2 = run({"teleport-stats", "--seed", "5", "--trials", "1"});
  EXPECT_EQ(single1.out, single2.out);
  std::filesystem::remove(trace1);
  std::filesystem::remove(trace2);
}

TEST(Cli, BraidCheck) {
  auto r = run({"braid-check", "--model", "ising", "--seed", "1", "--word", "s1"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  auto j = json::parse(r.out);
  EXPECT_GE(j.at("min_fidelity").get<double>(), 1 - 1e-9);
  EXPECT_TRUE(j.at("results")[0].at("resources_restored").get<bool>());
  r = run({"braid-check", "--model", "ising", "--seed", "1", "--word", "s1 s1'"});
  EXPECT_EQ(r.code, 0);
  r = run({"braid-check", "--model", "fibonacci", "--seed", "2", "--trials", "3", "--word", "s1 s2 s1", "--compare",
           "s2 s1 s2"});
  EXPECT_EQ(r.code, 0);
  j = json::parse(r.out);
  for (const auto& t : j.at("results")) EXPECT_GE(t.at("cross_fidelity").get<double>(), 1 - 1e-9);
  // Different words are reported as different. Two anyons span a one-dimensional space, so use three.
  r = run({"braid-check", "--model", "fibonacci", "--seed", "2", "--word", "s1", "--compare", "s1'", "--n", "3"});
  EXPECT_EQ(r.code, 1);
  r = run({"braid-check", "--model", "fibonacci", "--seed", "2", "--word", "s1 s2' s3", "--economy", "--human"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  r = run({"braid-check", "--model", "su2_3", "--seed", "2", "--word", "s2 s1", "--init", "array", "--format", "csv",
           "--routing", "over"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, CompileAndRun) {
  const auto path = temp_path("schedule.json");
  auto r = run({"compile", "--model", "fibonacci", "--word", "s1 s2'", "--readout", "1:3", "--output", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto sched = json::parse(slurp(path));
  EXPECT_EQ(sched.at("steps").size(), 7u);
  EXPECT_EQ(sched.at("computational"), 3);
  r = run({"compile", "--model", "fibonacci", "--word", "s1 s2'", "--readout", "1:3"});
  EXPECT_EQ(json::parse(r.out), sched);
  EXPECT_EQ(run({"compile", "--word", "s1", "--readout", "1-2"}).code, 2);

  r = run({"run", "--schedule", path.string(), "--seed", "4", "--trials", "5"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j.at("results").size(), 5u);
  for (const auto& t : j.at("results")) {
    EXPECT_GE(t.at("fidelity").get<double>(), 1 - 1e-9);
    EXPECT_EQ(t.at("readouts").size(), 1u);
  }
  EXPECT_EQ(run({"run", "--schedule", path.string(), "--seed", "4", "--trials", "5"}).out, r.out);
  EXPECT_EQ(run({"run", "--schedule", path.string(), "--seed", "4", "--model", "ising"}).code, 0);

  std::ofstream(path) << "{\"model\": ";
  EXPECT_EQ(run({"run", "--schedule", path.string(), "--seed", "4"}).code, 2);
  std::filesystem::remove(path);
}
