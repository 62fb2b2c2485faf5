#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace twospin {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "twospin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("twospin_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = (dir_ / name).string();
    std::ofstream(path) << text;
    return path;
  }

  std::string pair_file() {
    return write("pair.json", R"({"schema_version": 1, "model": "ising", "J": 0.3, "B": 0,
      "vertices": [{"id": 1}, {"id": 2}], "edges": [{"u": 1, "v": 2}]})");
  }

  std::string gen(const std::vector<std::string>& extra, const std::string& name) {
    const auto path = (dir_ / name).string();
    std::vector<std::string> args{"gen", "-o", path};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = run_cli(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return path;
  }

  fs::path dir_;
};

TEST_F(Cli, EstimateTwoVertexIsing) {
  const auto r = run_cli({"estimate", "-g", pair_file(), "-e", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["log_z_hat"].get<double>(), 1.430635131045831, 0.01);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["command"], "estimate");
  EXPECT_EQ(j["vertices"].size(), 2u);
  EXPECT_FALSE(j.contains("wall_seconds"));
}

TEST_F(Cli, CheckInapplicableInstance) {
  const auto path = gen({"-f", "random_regular", "--n", "10", "--regular-degree", "3", "-J", "0.6",
                         "--seed", "2"},
                        "rr.json");
  const auto r = run_cli({"check", "-g", path});
  EXPECT_EQ(r.code, 2);
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["contraction"].get<double>(), 1.0740991339960706, 1e-12);
  EXPECT_FALSE(j["applicable"].get<bool>());
}

TEST_F(Cli, EstimateInapplicableGivesExitTwoAndNoEstimate) {
  const auto path = gen({"-f", "random_regular", "--n", "10", "--regular-degree", "3", "-J", "0.6",
                         "--seed", "2"},
                        "rr.json");
  const auto r = run_cli({"estimate", "-g", path, "-e", "0.1"});
  EXPECT_EQ(r.code, 2);
  const auto j = json::parse(r.out);
  EXPECT_FALSE(j.contains("log_z_hat"));
  EXPECT_EQ(j["error"], "inapplicable");
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, GenCycleThenExact) {
  const auto path = gen({"-f", "cycle", "--n", "3", "-J", "0.2", "-B", "0.1"}, "c3.json");
  const auto r = run_cli({"exact", "-g", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["log_z"].get<double>(), 2.168645483904631, 1e-14);
  const auto c = run_cli({"exact", "-g", path, "-c", "1=+,2-"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(json::parse(c.out)["condition"], "{1+,2-}");
}

TEST_F(Cli, GenToStdoutParses) {
  const auto r = run_cli({"gen", "-f", "grid", "--rows", "2", "--cols", "3", "-m", "random",
                          "-J", "0.3", "-B", "0.5", "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto sys = parse_system(r.out);
  EXPECT_EQ(sys.vertex_count(), 6u);
  EXPECT_EQ(sys.graph().edge_count(), 7u);
}

TEST_F(Cli, BadInputsExitOne) {
  EXPECT_EQ(run_cli({"estimate", "-g", (dir_ / "missing.json").string(), "-e", "0.1"}).code, 1);
  const auto bad = write("bad.json", "{\"schema_version\": 1, \"vertices\": [}");
  const auto r = run_cli({"exact", "-g", bad});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.json"), std::string::npos);
  EXPECT_NE(r.err.find("line 1"), std::string::npos);
  const auto loop = write("loop.json", R"({"schema_version": 1, "model": "ising", "J": 0.1, "B": 0,
    "vertices": [{"id": 1}], "edges": [{"u": 1, "v": 1}]})");
  EXPECT_EQ(run_cli({"exact", "-g", loop}).code, 1);
  EXPECT_EQ(run_cli({"estimate", "-g", pair_file(), "-e", "-1"}).code, 1);
  EXPECT_EQ(run_cli({"estimate", "-g", pair_file(), "-e", "0.1", "--frontier", "sideways"}).code, 1);
  EXPECT_EQ(run_cli({"exact", "-g", pair_file(), "-c", "1*"}).code, 1);
  EXPECT_EQ(run_cli({"nonsense"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
}

TEST_F(Cli, ReportsAreBitIdenticalAcrossRunsAndThreads) {
  const auto path = gen({"-f", "erdos_renyi", "--n", "12", "--mean-degree", "3", "-m", "random",
                         "-J", "0.15", "-B", "1", "--seed", "8"},
                        "er.json");
  const auto a = run_cli({"estimate", "-g", path, "-e", "0.05", "-j", "1"});
  const auto b = run_cli({"estimate", "-g", path, "-e", "0.05", "-j", "1"});
  const auto c = run_cli({"estimate", "-g", path, "-e", "0.05", "-j", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  const auto timed = run_cli({"estimate", "-g", path, "-e", "0.05", "--timing"});
  EXPECT_TRUE(json::parse(timed.out).contains("wall_seconds"));
}

TEST_F(Cli, FrontierOption) {
  const auto path = gen({"-f", "random_regular", "--n", "16", "--regular-degree", "3", "-J", "0.3",
                         "--seed", "1"},
                        "rr16.json");
  for (const char* f : {"minus", "plus", "0", "-1.5"}) {
    const auto r = run_cli({"estimate", "-g", path, "-e", "1", "--frontier", f});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(json::parse(run_cli({"estimate", "-g", path, "-e", "1", "--frontier", "plus"}).out)["frontier"],
            "plus");
}

TEST_F(Cli, SawTreeDump) {
  const auto path = gen({"-f", "cycle", "--n", "3", "-J", "0.2"}, "c3.json");
  const auto r = run_cli({"saw-tree", "-g", path, "-r", "1", "--depth", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "1 depth=0 free\n"
            "  2 depth=1 free\n"
            "    3 depth=2 free\n"
            "      1 depth=3 fixed+\n"
            "  3 depth=1 free\n"
            "    2 depth=2 free\n"
            "      1 depth=3 fixed-\n");
}

TEST_F(Cli, DecayReport) {
  const auto path = gen({"-f", "random_regular", "--n", "10", "--regular-degree", "3", "-J", "0.4",
                         "--seed", "3"},
                        "rr.json");
  const auto r = run_cli({"decay", "-g", path, "-r", "1", "-t", "1", "-n", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["bound"].get<double>(), 4 * 0.4 * 3, 1e-12);
  EXPECT_LE(j["max_difference"].get<double>(), j["bound"].get<double>());
}

TEST_F(Cli, VerifySmallSuites) {
  const auto r = run_cli({"verify", "-s", "contraction", "-n", "1000"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(json::parse(r.out)["passed"].get<bool>());
  const auto strict = run_cli({"verify", "-s", "lipschitz", "-n", "1000", "--tolerance", "-1"});
  EXPECT_EQ(strict.code, 1);
}

}  // namespace
}  // namespace twospin
