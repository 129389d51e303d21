#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "interaural/grid.hpp"
#include "interaural/io/csv.hpp"
#include "interaural/stimulus.hpp"

namespace fs = std::filesystem;
using namespace interaural;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(INTERAURAL_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("interaural_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ArgumentErrors) {
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("joint --kind r-ipd --snr 0 --psi 90 -o " + path("a.csv")), 1);
  EXPECT_EQ(run_cli("joint --kind bogus --snr 0 --psi 90deg -o " + path("a.csv")), 1);
  EXPECT_EQ(run_cli("joint --kind r-ipd --snr 0 --psi 0deg -o " + path("a.csv")), 1);
  EXPECT_EQ(run_cli("marginal --which ipd --snr 0 --psi 90deg --axis 1:0:3 -o " + path("a.csv")), 1);
  EXPECT_EQ(run_cli("--version"), 0);
}

TEST_F(Cli, PowIpdGridHasSentinelOutsideSupport) {
  ASSERT_EQ(run_cli("joint --kind pow-ipd --snr 0 --psi 180deg --axis1 0:4:41 --axis2 -pi:pi:361 -o " + path("p.csv") +
                    " --svg " + path("p.svg")),
            0);
  std::ifstream is(path("p.csv"));
  io::Metadata meta;
  const auto g = io::read_grid_csv(is, &meta);
  // axis1 is p'/C^2: index 25 -> 2.5, axis2 index 270 -> pi/2.
  EXPECT_NEAR(g.axis1[25], 2.5, 1e-12);
  EXPECT_NEAR(g.axis2[270], kPi / 2, 1e-12);
  EXPECT_EQ(g.at(25, 270), kUndefinedDensity);
  EXPECT_GE(g.at(10, 270), 0.0);
  EXPECT_TRUE(fs::exists(path("p.svg")));
}

TEST_F(Cli, RIpdGridIsNormalized) {
  ASSERT_EQ(run_cli("joint --kind r-ipd --snr 0 --psi 180deg -o " + path("r.csv")), 0);
  std::ifstream is(path("r.csv"));
  const auto g = io::read_grid_csv(is);
  for (double v : g.values) ASSERT_GE(v, 0.0);
  EXPECT_NEAR(g.riemann_mass(), 1.0, 0.02);
}

TEST_F(Cli, MarginalColumnsAndDeterminism) {
  const std::string args = "marginal --which ild --snr -10,0 --psi 90deg,180deg --axis -20:20:41 -o ";
  ASSERT_EQ(run_cli(args + path("m1.csv")), 0);
  ASSERT_EQ(run_cli(args + path("m2.csv")), 0);
  EXPECT_EQ(slurp(path("m1.csv")), slurp(path("m2.csv")));
  std::ifstream is(path("m1.csv"));
  const auto t = io::read_table(is);
  EXPECT_EQ(t.header.size(), 5u);
  EXPECT_EQ(t.rows.size(), 41u);
  for (std::size_t c = 1; c < 5; ++c) EXPECT_NEAR(t.rows[15][c], t.rows[25][c], 1e-8);
}

TEST_F(Cli, GlobalPhaseShiftsIpdCurve) {
  ASSERT_EQ(run_cli("marginal --which ipd --snr 10 --psi 90deg -o " + path("a.csv")), 0);
  ASSERT_EQ(run_cli("marginal --which ipd --snr 10 --psi 90deg --global-phase 180deg -o " + path("b.csv")), 0);
  std::ifstream ia(path("a.csv")), ib(path("b.csv"));
  const auto a = io::read_table(ia);
  const auto b = io::read_table(ib);
  ASSERT_EQ(a.rows.size(), 181u);
  for (std::size_t i = 0; i + 1 < 181; ++i) EXPECT_EQ(b.rows[(i + 90) % 180][1], a.rows[i][1]);
}

TEST_F(Cli, QuickVerifyPasses) {
  const std::string args = "verify --snr 0 --psi 90deg --oracle 0:90deg --samples 100000 --identity-points 500 --waveform-duration 0 -o ";
  ASSERT_EQ(run_cli(args + path("v.json")), 0);
  const auto j = nlohmann::json::parse(slurp(path("v.json")));
  EXPECT_EQ(j["pass"], true);
  EXPECT_GT(j["checks"].size(), 10u);
}

TEST_F(Cli, SynthWritesWavAndCues) {
  ASSERT_EQ(run_cli("synth --snr -10 --psi 180deg --duration 0.1 --trace-step 10 --wav " + path("s.wav") +
                    " --cues " + path("s.csv")),
            0);
  EXPECT_EQ(fs::file_size(path("s.wav")), 44u + 4800u * 8u);
  std::ifstream is(path("s.csv"));
  const auto t = io::read_table(is);
  EXPECT_EQ(t.header[1], "ipd_rad");
  EXPECT_EQ(t.rows.size(), 432u);
  EXPECT_EQ(run_cli("synth --snr -10 --psi 180deg"), 1);
}
