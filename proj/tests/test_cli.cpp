#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(HARDEDGE_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path tmp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hardedge_cli_" + name);
}

}  // namespace

TEST(Cli, GumbelValue) {
  const auto r = run("gumbel --kappa 1 --t 1 --x 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("0.1353352832", 0), 0u) << r.out;
}

TEST(Cli, GumbelResiduals) {
  const auto r = run("gumbel --kappa 0.7 --t 2 --x 3 --residuals");
  ASSERT_EQ(r.code, 0);
  const auto line = r.out.substr(r.out.find('\n') + 1);
  const auto j = nlohmann::json::parse(line);
  for (const auto& [k, v] : j.items()) EXPECT_LE(std::abs(v.get<double>()), 1e-12) << k;
}

TEST(Cli, Thm3ResidualReported) {
  const auto r = run("lax-residual --pair thm3 --kappa 1.5");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  EXPECT_LE(j["max_residual"].get<double>(), 1e-10);
  EXPECT_EQ(j.begin().key(), "pair");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("--no-such-flag").code, 2);
  EXPECT_EQ(run("gumbel --no-such-flag").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("lax-residual --pair thm9").code, 2);
  EXPECT_EQ(run("gumbel --kappa -1").code, 2);
  EXPECT_EQ(run("mc-sample --n 1").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, McSamplesDeterministic) {
  const auto a = run("mc-sample --replicas 50 --seed 9");
  const auto b = run("mc-sample --replicas 50 --seed 9");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("replica,value\n", 0), 0u);
  EXPECT_EQ(a.out.find('\r'), std::string::npos);
  EXPECT_NE(a.out, run("mc-sample --replicas 50 --seed 10").out);
}

TEST(Cli, McReport) {
  const auto rep = tmp("mc.json"), csv = tmp("mc.csv");
  ASSERT_EQ(run("mc-sample --replicas 4000 --out " + csv.string() + " --report " + rep.string()).code, 0);
  const auto j = nlohmann::json::parse(slurp(rep));
  EXPECT_LE(j["ks_dense_oracle"].get<double>(), 0.05);
  EXPECT_LE(j["ks_exponential_law"].get<double>(), 0.03);
  EXPECT_FALSE(j.contains("exploratory_fp"));
  const auto body = slurp(csv);
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 4001);
}

TEST(Cli, FpSolveCsvAndReport) {
  const auto rep = tmp("fp.json"), out = tmp("fp.csv");
  ASSERT_EQ(run("fp-solve --nx 40 --nt 40 --out " + out.string() + " --report " + rep.string()).code, 0);
  const auto body = slurp(out);
  EXPECT_EQ(body.rfind("t,x,F\n", 0), 0u);
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 40 * 40 + 1);
  const auto j = nlohmann::json::parse(slurp(rep));
  EXPECT_LE(j["closed_form_sup"].get<double>(), 1e-2);
  // Byte-identical rerun.
  const auto out2 = tmp("fp2.csv");
  ASSERT_EQ(run("fp-solve --nx 40 --nt 40 --out " + out2.string()).code, 0);
  EXPECT_EQ(slurp(out2), body);
}

TEST(Cli, PiiiAndTwTables) {
  const auto p = run("piii-solve --points 5");
  ASSERT_EQ(p.code, 0);
  std::istringstream ps(p.out);
  std::string line;
  std::getline(ps, line);
  EXPECT_EQ(line, "t,q,y,yp,phi,piii_residual");
  int rows = 0;
  while (std::getline(ps, line)) {
    ++rows;
    EXPECT_LE(std::stod(line.substr(line.rfind(',') + 1)), 1e-6) << line;
  }
  EXPECT_EQ(rows, 5);
  const auto tw = run("tw-solve --points 5");
  ASSERT_EQ(tw.code, 0);
  EXPECT_EQ(tw.out.rfind("t,q,qp,s_plus,s_minus,product_residual,h0\n", 0), 0u);
  EXPECT_EQ(run("tw-solve --q0 1.5").code, 2);
}

TEST(Cli, LimitSweepJson) {
  const auto r = run("limit-sweep --alpha 100 --alpha 1000");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["records"].size(), 2u);
  EXPECT_TRUE(j["decreasing"]["thm4_distance"].get<bool>());
}

TEST(Cli, VerifyAllPasses) {
  const auto r = run("verify-all");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 12);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}
