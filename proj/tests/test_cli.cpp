#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("finsler_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string("\"") + FINSLER_SSM_BINARY + "\" " + args + " >\"" +
                            out.string() + "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, CatalogListsModels) {
  const CliResult r = run("catalog");
  EXPECT_EQ(r.code, 0);
  for (const char* name : {"euclidean", "funk", "berwald", "shen"})
    EXPECT_NE(r.out.find(name), std::string::npos) << name;
}

TEST_F(Cli, CatalogJson) {
  const CliResult r = run("catalog --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  EXPECT_GE(j.size(), 4u);
  EXPECT_TRUE(j[0].contains("name"));
}

TEST_F(Cli, UnknownFlagIsUsageError) {
  EXPECT_EQ(run("catalog --bogus").code, 2);
  EXPECT_EQ(run("verify --metric funk --frobnicate 3").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(Cli, VerifyPassExitsZero) {
  const fs::path report = dir_ / "r.json";
  const CliResult r = run("verify --metric euclidean --n 3 --samples 50 --seed 7 --out \"" + report.string() + "\"");
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(report));
  EXPECT_TRUE(j.at("summary").at("pass").get<bool>());
}

TEST_F(Cli, VerifyFailureExitsOne) {
  // An absurdly tight tolerance makes an otherwise passing suite fail.
  const CliResult r = run("verify --metric funk --n 2 --samples 5 --tol-oracle_rel 1e-300");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("FAIL"), std::string::npos);
}

TEST_F(Cli, VerifyConfigErrorsExitTwo) {
  EXPECT_EQ(run("verify --metric nonesuch").code, 2);
  EXPECT_EQ(run("verify --metric funk --n 1").code, 2);
  EXPECT_EQ(run("verify --metric shen --param a").code, 2);
  EXPECT_EQ(run("verify --metric shen --param a=2").code, 2);
  EXPECT_EQ(run("verify --metric funk --tol-oracle_rel -1").code, 2);
  EXPECT_EQ(run("verify --config \"" + (dir_ / "missing.cfg").string() + "\"").code, 2);
}

TEST_F(Cli, VerifyConfigFileWithFlagOverride) {
  const fs::path cfg = dir_ / "run.cfg", report = dir_ / "r.json";
  std::ofstream(cfg) << "metric=berwald\nn=2\nsamples=4\nseed=5\n";
  const CliResult r = run("verify --config \"" + cfg.string() + "\" --samples 3 --out \"" + report.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(report));
  EXPECT_EQ(j.at("environment").at("metric"), "berwald");
  EXPECT_EQ(j.at("environment").at("samples"), 3);
  EXPECT_EQ(j.at("environment").at("seed"), 5);
}

TEST_F(Cli, VerifyIsByteDeterministic) {
  const fs::path a = dir_ / "a.json", b = dir_ / "b.json";
  const std::string args = "verify --metric berwald --n 3 --samples 20 --seed 4 --out ";
  ASSERT_EQ(run(args + "\"" + a.string() + "\"").code, 0);
  ASSERT_EQ(run(args + "\"" + b.string() + "\"").code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(Cli, TensorsDump) {
  const CliResult r = run("tensors --metric funk --x 0.3,0 --y 0,1");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  // Worked bound at |x| = 0.3: ‖I‖ ≤ (3/√2)√(1 − √0.91) ≈ 0.4553 at F = 1.
  const double F = j.at("F").get<double>();
  EXPECT_LT(j.at("I").at("norm").get<double>() * F, 0.4553);
  EXPECT_TRUE(j.contains("G"));
  EXPECT_TRUE(j.contains("landsberg"));
}

TEST_F(Cli, TensorsErrors) {
  EXPECT_EQ(run("tensors --metric funk --x 0.3,zz --y 0,1").code, 2);
  EXPECT_EQ(run("tensors --metric funk --x 0.3,0 --y 0,0").code, 2);
  EXPECT_EQ(run("tensors --metric funk --x 0.3 --y 0,1").code, 2);
  EXPECT_EQ(run("tensors --metric funk --x 1.5,0 --y 0,1").code, 1);
}

TEST_F(Cli, GeodesicTrace) {
  const fs::path csv = dir_ / "g.csv";
  const CliResult r = run("geodesic --metric funk --x0 0,0 --y0 1,0 --steps 1000 --dt 1e-3 --out \"" + csv.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("tau,x1,x2,y1,y2,F\n", 0), 0u);
  const auto tail = text.rfind("# steps=1000 max_F_drift=");
  ASSERT_NE(tail, std::string::npos);
  const double drift = std::stod(text.substr(tail + std::string("# steps=1000 max_F_drift=").size()));
  EXPECT_LE(drift, 1e-6);
  EXPECT_NE(text.find("domain_exit=false"), std::string::npos);
}

TEST_F(Cli, GeodesicRejectsNonPositiveStep) {
  EXPECT_EQ(run("geodesic --metric funk --x0 0,0 --y0 1,0 --dt 0").code, 2);
  EXPECT_EQ(run("geodesic --metric funk --x0 0,0 --y0 1,0 --dt -1e-3").code, 2);
}
