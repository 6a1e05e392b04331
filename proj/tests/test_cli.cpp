#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = CPSG_CLI_PATH;
const std::string kData = CPSG_DATA_DIR;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cpsg_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, RejectsBadInvocations) {
  EXPECT_NE(run(""), 0);
  EXPECT_NE(run("frobnicate"), 0);
  EXPECT_NE(run("train /nonexistent.json --params " + kData + "/reference_params.json"), 0);
  EXPECT_NE(run("baseline " + kData + "/harvey_synth.json --method banana"), 0);
}

TEST(Cli, TrainSimulateReport) {
  const fs::path out = scratch_dir("pipeline");
  const std::string o = " --out-dir " + out.string() + " ";
  const std::string scen = kData + "/harvey_synth.json";
  const std::string params = " --params " + kData + "/reference_params.json";
  ASSERT_EQ(run(o + "train " + scen + params), 0);
  for (const char* f : {"trace.csv", "regressors.csv", "weights.json", "openloop.csv",
                        "manifest_train.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  ASSERT_EQ(run(o + "simulate " + scen + params + " --weights " + (out / "weights.json").string()), 0);
  ASSERT_TRUE(fs::exists(out / "policy.csv"));
  ASSERT_EQ(run(o + "report --traces " + (out / "trace.csv").string() + " " +
                (out / "openloop.csv").string() + " " + (out / "policy.csv").string()),
            0);
  const std::string md = slurp(out / "report.md");
  EXPECT_NE(md.find("RMSE"), std::string::npos);
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest_train.json"));
  EXPECT_EQ(manifest.at("command"), "train");
  EXPECT_TRUE(manifest.contains("config_hash"));
  EXPECT_FALSE(manifest.at("outputs").empty());
}

TEST(Cli, DeviationTable) {
  const fs::path out = scratch_dir("deviate");
  const std::string o = " --out-dir " + out.string() + " ";
  const std::string scen = kData + "/harvey_synth.json";
  ASSERT_EQ(run(o + "train " + scen + " --params " + kData + "/reference_params.json --extend 0"), 0);
  ASSERT_EQ(run(o + "deviate " + scen + " --n 5 --weights " + (out / "weights.json").string()), 0);
  const auto dev = nlohmann::json::parse(slurp(out / "deviation.json"));
  EXPECT_EQ(dev.at("entries").size(), 9u);
  const std::string md = slurp(out / "deviation.md");
  for (const char* p : {"| P1 |", "| P2 |", "| P3 |"}) EXPECT_NE(md.find(p), std::string::npos);
}
