// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "interaural/verify.hpp"

namespace fs = std::filesystem;
using namespace interaural;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<StimulusParams> grid16() {
  std::vector<StimulusParams> out;
  for (double snr : {-20.0, -10.0, 0.0, 10.0}) {
    for (double psi : {kPi / 4, kPi / 2, 3 * kPi / 4, kPi}) out.push_back(StimulusParams::from_snr_db(snr, psi));
  }
  return out;
}

int failures = 0;

void report(int id, const std::string& title, const VerificationReport& rep) {
  const bool ok = rep.passed();
  if (!ok) ++failures;
  std::printf("%s criterion %d: %s (%zu checks)\n", ok ? "PASS" : "FAIL", id, title.c_str(), rep.checks.size());
  for (const auto& c : rep.checks) {
    if (c.pass) continue;
    std::printf("    failed %s", c.name.c_str());
    if (c.snr_db) std::printf(" snr=%gdB psi=%gdeg", *c.snr_db, *c.psi * 180.0 / kPi);
    std::printf(" %s = %.6g, threshold %.6g\n", c.metric.c_str(), c.value, c.threshold);
  }
  std::fflush(stdout);
}

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

// Byte-by-byte comparison of every file under two directories.
bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
  files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), a);
    if (!fs::exists(b / rel) || slurp(e.path()) != slurp(b / rel)) return false;
    ++files;
  }
  std::size_t other = 0;
  for (const auto& e : fs::recursive_directory_iterator(b)) other += e.is_regular_file();
  return files == other && files > 0;
}

}  // namespace

int main() {
  const auto combos = grid16();
  const std::vector<StimulusParams> oracle_points{StimulusParams::from_snr_db(-10.0, kPi),
                                                  StimulusParams::from_snr_db(0.0, kPi / 2)};

  {
    VerificationReport rep;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& p : combos) check_joint_normalization(rep, p);
    rep.at_most("joint_normalization_runtime", nullptr, "seconds for 16 combinations", seconds_since(t0), 60.0);
    report(1, "joint densities integrate to one", rep);
  }
  {
    VerificationReport rep;
    for (const auto& p : combos) check_route_agreement(rep, p);
    report(2, "IPD marginal routes agree", rep);
  }
  {
    VerificationReport rep;
    check_exact_identities(rep, 10000, 1);
    report(3, "SNR equivalence, reflection, reciprocity, power scaling", rep);
  }
  {
    VerificationReport rep;
    for (const auto& p : combos) {
      check_support(rep, p);
      check_pow_peak(rep, p);
    }
    report(4, "P' support boundary and peak location", rep);
  }
  {
    VerificationReport stat, support;
    for (const auto& p : oracle_points) {
      VerificationReport rep;
      OracleOptions opt;
      const auto t0 = std::chrono::steady_clock::now();
      check_sampler_oracle(rep, p, opt);
      rep.at_most("oracle_runtime", &p, "seconds for 1e7 samples and statistics", seconds_since(t0), 300.0);
      for (const auto& c : rep.checks) (c.name == "oracle_support_violations" ? support : stat).checks.push_back(c);
    }
    report(5, "Monte Carlo sampler matches the model (KS, TV)", stat);
    report(6, "no sample exceeds the P' support boundary", support);
  }
  {
    VerificationReport rep;
    check_delta_limits(rep, kPi / 2);
    report(7, "delta limits at extreme SNR", rep);
  }
  {
    VerificationReport rep;
    check_quadrature_selftest(rep);
    report(8, "quadrature self-test", rep);
  }
  {
    VerificationReport rep;
    WaveformOptions opt;
    check_waveform_oracle(rep, oracle_points.front(), opt);
    report(9, "waveform cues match the model", rep);
  }
  {
    VerificationReport rep;
    const fs::path root = fs::temp_directory_path() / "interaural_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    for (int k = 0; k < 2; ++k) {
      const auto d = root / ("run" + std::to_string(k));
      fs::create_directories(d);
      run_cli("figure fig4 --svg -o " + (d / "fig4").string());
      run_cli("figure fig3 -o " + (d / "fig3").string());
      run_cli("verify --snr 0 --psi 90deg --oracle 0:90deg --samples 100000 --identity-points 1000 "
              "--waveform-duration 1 -o " + (d / "verify.json").string());
    }
    std::size_t files = 0;
    const bool same = same_tree(root / "run0", root / "run1", files);
    rep.at_least("rerun_byte_identical", nullptr, "files compared (0 on mismatch)", same ? double(files) : 0.0, 1.0);
    fs::remove_all(root);
    report(10, "reruns with the same seed are byte-identical", rep);
  }

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
