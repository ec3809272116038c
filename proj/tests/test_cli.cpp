#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "morkit/models.hpp"

using namespace morkit;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("morkit_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST(Cli, ReduceWritesModelsAndReport) {
  const fs::path dir = fresh_dir("reduce");
  const CliRun r = run({"reduce", "--som-n1", "10", "-r", "4", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  int mtx = 0;
  for (const auto& e : fs::directory_iterator(dir)) mtx += e.path().extension() == ".mtx";
  EXPECT_EQ(mtx, 10);
  ASSERT_TRUE(fs::exists(dir / "report.json"));
  const auto report = nlohmann::json::parse(std::ifstream(dir / "report.json"));
  EXPECT_TRUE(report.contains("converged"));
}

TEST(Cli, OrderNotBelowModelOrderIsConfigError) {
  const CliRun r = run({"reduce", "--som-n1", "10", "-r", "31", "--out", fresh_dir("big_r").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--order"), std::string::npos) << r.err;
}

TEST(Cli, IterationLimitGivesExitTwoWithReport) {
  const fs::path dir = fresh_dir("max_iter");
  const CliRun r = run({"reduce", "--som-n1", "10", "-r", "6", "--max-iter", "1", "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  const auto report = nlohmann::json::parse(std::ifstream(dir / "report.json"));
  EXPECT_FALSE(report["converged"].get<bool>());
  EXPECT_EQ(report["iterations"].get<int>(), 1);
}

TEST(Cli, InputSourceRequiredExactlyOnce) {
  EXPECT_EQ(run({"reduce", "-r", "2"}).code, 1);
  EXPECT_EQ(run({"reduce", "--som-n1", "2", "--manifest", "x.json", "-r", "2"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"reduce", "--som-n1", "2", "-r", "2", "--init", "bogus"}).code, 1);
}

TEST(Cli, ManifestInput) {
  const fs::path data = fresh_dir("manifest_data");
  const fs::path out = fresh_dir("manifest_out");
  SomParams p;
  p.n1 = 3;
  write_dataset(build_som(p), data, "som3");
  const CliRun r = run({"reduce", "--manifest", (data / "manifest.json").string(), "-r", "2", "--out", out.string()});
  EXPECT_NE(r.code, 1) << r.err;
  EXPECT_TRUE(fs::exists(out / "pos_M.mtx"));
  const CliRun missing = run({"reduce", "--manifest", (data / "nope.json").string(), "-r", "2"});
  EXPECT_EQ(missing.code, 1);
}

TEST(Cli, SigmaCsvLayout) {
  const fs::path dir = fresh_dir("sigma");
  const CliRun r = run({"sigma", "--som-n1", "10", "-r", "4", "--out", dir.string()});
  EXPECT_NE(r.code, 1) << r.err;
  const auto lines = read_lines(dir / "sigma.csv");
  ASSERT_EQ(lines.size(), 201u);
  EXPECT_EQ(lines[0], "omega,sigma_full,sigma_pos,sigma_vel,abs_err_pos,abs_err_vel,rel_err_pos,rel_err_vel");
  EXPECT_NE(run({"sigma", "--som-n1", "10", "-r", "4", "--grid-points", "7", "--out", dir.string()}).code, 1);
  EXPECT_EQ(read_lines(dir / "sigma.csv").size(), 8u);
}

TEST(Cli, H2ErrorReportFields) {
  const fs::path dir = fresh_dir("h2err");
  const CliRun r = run({"h2err", "--som-n1", "5", "-r", "4", "--out", dir.string()});
  ASSERT_TRUE(fs::exists(dir / "h2err.json")) << r.err;
  const auto j = nlohmann::json::parse(std::ifstream(dir / "h2err.json"));
  EXPECT_GT(j["h2_full"].get<double>(), 0.0);
  for (const char* level : {"h2_position_error", "h2_velocity_error"}) {
    if (j[level].is_null()) continue;
    const double p = j[level]["P"].get<double>();
    const double q = j[level]["Q"].get<double>();
    EXPECT_NEAR(p, q, 1e-6 * std::max(p, 1e-300) + 1e-12) << level;
  }
  for (const auto& [name, res] : j["residuals"].items()) EXPECT_LE(res.get<double>(), 1e-8) << name;
}

TEST(Cli, SpeedupReportFields) {
  const fs::path dir = fresh_dir("speedup");
  const CliRun r = run({"speedup", "--som-n1", "20", "-r", "4", "--grid-points", "20", "--repetitions", "3", "--out",
                     dir.string()});
  EXPECT_NE(r.code, 1) << r.err;
  const auto j = nlohmann::json::parse(std::ifstream(dir / "speedup.json"));
  EXPECT_EQ(j["dim_full"].get<int>(), 61);
  EXPECT_EQ(j["dim_rom"].get<int>(), 4);
  EXPECT_GT(j["t_full"].get<double>(), 0.0);
  EXPECT_GT(j["t_rom"].get<double>(), 0.0);
  EXPECT_NEAR(j["speedup"].get<double>(), j["t_full"].get<double>() / j["t_rom"].get<double>(), 1e-9);
}
