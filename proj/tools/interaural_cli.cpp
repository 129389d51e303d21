// interaural: evaluate, export and verify the interaural cue densities.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "interaural/grid.hpp"
#include "interaural/histogram.hpp"
#include "interaural/io/angle.hpp"
#include "interaural/io/csv.hpp"
#include "interaural/io/svg.hpp"
#include "interaural/marginals.hpp"
#include "interaural/quadrature.hpp"
#include "interaural/stimulus.hpp"
#include "interaural/verify.hpp"
#include "interaural/waveform.hpp"

namespace fs = std::filesystem;
using namespace interaural;

namespace {

constexpr int kExitArgs = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitQuadrature = 3;

struct AxisSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  std::vector<double> values() const { return linspace(lo, hi, n); }
};

// "lo:hi:n"; lo and hi may use pi, e.g. "-pi:pi:181".
AxisSpec parse_axis(const std::string& s) {
  const auto a = s.find(':');
  const auto b = s.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    throw std::invalid_argument("axis '" + s + "' must look like lo:hi:n");
  }
  AxisSpec ax;
  ax.lo = io::detail::parse_pi_expr(s.substr(0, a));
  ax.hi = io::detail::parse_pi_expr(s.substr(a + 1, b - a - 1));
  const long long n = std::stoll(s.substr(b + 1));
  if (!(ax.lo < ax.hi) || n < 2) throw std::invalid_argument("axis '" + s + "' needs lo < hi and n >= 2");
  ax.n = static_cast<std::size_t>(n);
  return ax;
}

std::vector<double> parse_angles(const std::vector<std::string>& v) {
  std::vector<double> out;
  for (const auto& s : v) out.push_back(io::parse_angle(s));
  return out;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string param_label(double snr_db, double psi) {
  return "snr=" + fmt("%g", snr_db) + "dB/psi=" + io::angle_label(psi);
}

std::string file_tag(double snr_db, double psi) {
  return "snr" + fmt("%g", snr_db) + "dB_psi" + io::angle_label(psi);
}

io::Metadata base_meta(const std::string& command) {
  return {{"tool", "interaural"}, {"version", kToolVersion}, {"command", command}};
}

void add_param_meta(io::Metadata& m, const StimulusParams& p) {
  m.emplace_back("snr_db", fmt("%.12g", p.snr_db()));
  m.emplace_back("psi_rad", io::format_double(p.tone_ipd()));
  m.emplace_back("tone_amplitude", io::format_double(p.tone_amplitude()));
  m.emplace_back("noise_variance", io::format_double(p.noise_variance()));
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

// ---------------------------------------------------------------------------
// joint

/// For pow-ipd the first axis is p'/C^2 and the density is with respect to
/// (p'/C^2, dphi).
PdfGrid joint_grid(JointKind kind, const StimulusParams& p, const AxisSpec& a1, const AxisSpec& a2,
                   unsigned workers) {
  if (kind == JointKind::r_ipd) return compute_joint_grid(kind, p, a1.values(), a2.values(), workers);
  const double c2 = p.tone_power();
  std::vector<double> pv = a1.values();
  for (double& x : pv) x *= c2;
  PdfGrid g = compute_joint_grid(kind, p, pv, a2.values(), workers);
  g.axis1 = a1.values();
  g.axis1_name = "p_over_c2";
  for (double& v : g.values) {
    if (v != kUndefinedDensity) v *= c2;
  }
  return g;
}

void write_joint(const fs::path& csv, const fs::path& svg, JointKind kind, const StimulusParams& p,
                 const PdfGrid& g, const std::string& command) {
  auto meta = base_meta(command);
  meta.emplace_back("kind", std::string(to_string(kind)));
  add_param_meta(meta, p);
  meta.emplace_back("density", kind == JointKind::r_ipd ? "f(r, ipd)" : "C^2 f(p, ipd) on p/C^2");
  auto os = open_out(csv);
  io::write_grid_csv(os, g, meta);
  if (!svg.empty()) {
    io::SvgOptions opt;
    opt.title = std::string(to_string(kind)) + " " + param_label(p.snr_db(), p.tone_ipd());
    if (kind == JointKind::pow_ipd) opt.axis1_marks = {1.0};
    opt.axis2_marks = {p.tone_ipd()};
    auto ss = open_out(svg);
    io::write_heatmap_svg(ss, g, opt);
  }
}

// ---------------------------------------------------------------------------
// marginal curves

std::string axis_name(MarginalKind k, PowAxisScale s) {
  switch (k) {
    case MarginalKind::ipd: return "ipd_rad";
    case MarginalKind::iar: return "r";
    case MarginalKind::ild: return "ild_db";
    case MarginalKind::pow: return s == PowAxisScale::db ? "p_over_c2_db" : "p_over_c2";
  }
  return "x";
}

MarginalKind parse_kind(const std::string& s) {
  if (s == "ipd") return MarginalKind::ipd;
  if (s == "iar") return MarginalKind::iar;
  if (s == "ild") return MarginalKind::ild;
  if (s == "pow") return MarginalKind::pow;
  throw std::invalid_argument("unknown marginal '" + s + "'");
}

void write_marginals(const fs::path& out, MarginalKind which, const std::vector<double>& snrs,
                     const std::vector<double>& psis, const std::vector<double>& axis, PowAxisScale scale,
                     double global_phase, const std::string& command) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  for (double psi : psis) {
    for (double snr : snrs) {
      const auto p = StimulusParams::from_snr_db(snr, psi);
      auto curve = compute_marginal_curve(which, p, axis, scale);
      if (global_phase != 0.0) curve = apply_global_phase(curve, global_phase);
      names.push_back(param_label(snr, p.tone_ipd()));
      cols.push_back(std::move(curve.density));
    }
  }
  auto meta = base_meta(command);
  meta.emplace_back("marginal", std::string(to_string(which)));
  meta.emplace_back("noise_variance", "1");
  if (global_phase != 0.0) meta.emplace_back("global_phase_rad", io::format_double(global_phase));
  auto os = open_out(out);
  io::write_curves_csv(os, axis_name(which, scale), axis, names, cols, meta);
}

// ---------------------------------------------------------------------------
// figures

struct FigureOptions {
  fs::path out_dir = "figures";
  bool svg = false;
  std::uint64_t seed = 1;
  double duration_s = 10.0;
  unsigned workers = 1;
};

// Joint densities plus marginals compared with waveform-derived histograms.
void figure2(const FigureOptions& o, const std::vector<double>& snrs, const std::vector<double>& psis) {
  if (snrs.size() != psis.size()) throw std::invalid_argument("fig2 pairs --snr and --psi; give equal counts");
  const AxisSpec ipd_axis{-kPi, kPi, 181};
  for (std::size_t k = 0; k < snrs.size(); ++k) {
    const auto p = StimulusParams::from_snr_db(snrs[k], psis[k]);
    const std::string tag = file_tag(snrs[k], p.tone_ipd());
    for (JointKind kind : {JointKind::r_ipd, JointKind::pow_ipd}) {
      const AxisSpec a1 = kind == JointKind::r_ipd ? AxisSpec{0.0, 5.0, 201} : AxisSpec{0.0, 4.0, 201};
      const auto g = joint_grid(kind, p, a1, ipd_axis, o.workers);
      const std::string base = "fig2_" + std::string(to_string(kind)) + "_" + tag;
      write_joint(o.out_dir / (base + ".csv"), o.svg ? o.out_dir / (base + ".svg") : fs::path{}, kind, p, g,
                  "figure fig2");
    }
    const auto stim = synthesize_waveform(p, 48000.0, 500.0, 500.0, o.duration_s, o.seed);
    const auto tr = extract_cues(stim);
    struct Panel {
      MarginalKind which;
      double lo, hi;
      std::size_t bins;
    };
    for (const Panel& pan : {Panel{MarginalKind::ipd, -kPi, kPi, 90}, Panel{MarginalKind::ild, -40.0, 40.0, 160},
                             Panel{MarginalKind::pow, -40.0, 20.0, 120}}) {
      Histogram1D h(pan.lo, pan.hi, pan.bins);
      for (std::size_t i = 0; i < tr.size(); ++i) {
        switch (pan.which) {
          case MarginalKind::ipd: h.add(tr.ipd_rad[i]); break;
          case MarginalKind::ild: h.add(tr.ild_db[i]); break;
          default: h.add(10.0 * std::log10(tr.power_p[i] / p.tone_power())); break;
        }
      }
      std::vector<double> centers(pan.bins);
      for (std::size_t i = 0; i < pan.bins; ++i) centers[i] = h.center(i);
      const auto curve = compute_marginal_curve(pan.which, p, centers);
      // Histogram density relative to all samples, so out-of-range mass is not renormalized away.
      std::vector<double> emp(pan.bins);
      for (std::size_t i = 0; i < pan.bins; ++i) {
        emp[i] = static_cast<double>(h.count(i)) / (static_cast<double>(h.total()) * h.width());
      }
      auto meta = base_meta("figure fig2");
      add_param_meta(meta, p);
      meta.emplace_back("waveform", "fs=48000 f0=500 bandwidth=500 duration=" + fmt("%g", o.duration_s));
      meta.emplace_back("seed", std::to_string(o.seed));
      auto os = open_out(o.out_dir / ("fig2_marginal_" + std::string(to_string(pan.which)) + "_" + tag + ".csv"));
      io::write_curves_csv(os, axis_name(pan.which, PowAxisScale::db), centers, {"analytic", "waveform"},
                           {curve.density, emp}, meta);
    }
  }
}

void figure3(const FigureOptions& o, const std::vector<double>& snrs, const std::vector<double>& psis,
             const std::vector<double>& fixed_snrs, const std::vector<double>& psi_sweep) {
  for (MarginalKind which : {MarginalKind::ipd, MarginalKind::ild, MarginalKind::pow}) {
    const auto axis = default_axis(which);
    const std::string w(to_string(which));
    for (double psi : psis) {
      write_marginals(o.out_dir / ("fig3_" + w + "_psi" + io::angle_label(wrap_angle(psi)) + ".csv"), which, snrs,
                      {psi}, axis, PowAxisScale::db, 0.0, "figure fig3");
    }
    for (double snr : fixed_snrs) {
      write_marginals(o.out_dir / ("fig3_" + w + "_snr" + fmt("%g", snr) + "dB.csv"), which, {snr}, psi_sweep,
                      axis, PowAxisScale::db, 0.0, "figure fig3");
    }
  }
}

void figure4(const FigureOptions& o, const std::vector<double>& snrs, const std::vector<double>& psis) {
  for (double psi : psis) {
    for (double snr : snrs) {
      const auto p = StimulusParams::from_snr_db(snr, psi);
      const auto g = joint_grid(JointKind::pow_ipd, p, AxisSpec{0.0, 2.0, 201}, AxisSpec{-kPi, kPi, 361}, o.workers);
      const std::string base = "fig4_pow-ipd_" + file_tag(snr, p.tone_ipd());
      write_joint(o.out_dir / (base + ".csv"), o.svg ? o.out_dir / (base + ".svg") : fs::path{},
                  JointKind::pow_ipd, p, g, "figure fig4");
    }
  }
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::vector<double> snrs{-20.0, -10.0, 0.0, 10.0};
  std::vector<std::string> psis{"45deg", "90deg", "135deg", "180deg"};
  std::vector<std::string> oracle_points{"-10:180deg", "0:90deg"};
  std::size_t samples = thresholds::tv_min_samples;
  std::size_t identity_points = 10000;
  double waveform_duration = 60.0;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string out;
};

VerificationReport run_verify(const VerifyOptions& o) {
  VerificationReport rep;
  rep.seed = o.seed;
  check_quadrature_selftest(rep);
  check_exact_identities(rep, o.identity_points, o.seed);
  for (double psi : parse_angles(o.psis)) {
    for (double snr : o.snrs) {
      const auto p = StimulusParams::from_snr_db(snr, psi);
      check_joint_normalization(rep, p);
      check_marginal_normalization(rep, p);
      check_route_agreement(rep, p);
      check_support(rep, p);
      check_pow_peak(rep, p);
    }
  }
  std::vector<StimulusParams> oracle;
  for (const auto& s : o.oracle_points) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("oracle point '" + s + "' must be snr:angle");
    oracle.push_back(StimulusParams::from_snr_db(io::detail::parse_number(s.substr(0, colon)),
                                                 io::parse_angle(s.substr(colon + 1))));
  }
  if (o.samples > 0) {
    for (const auto& p : oracle) {
      check_sampler_oracle(rep, p, OracleOptions{o.samples, o.seed, o.workers, thresholds::tv_min_samples});
    }
  }
  if (o.waveform_duration > 0.0 && !oracle.empty()) {
    WaveformOptions w;
    w.duration_s = o.waveform_duration;
    w.seed = o.seed;
    check_waveform_oracle(rep, oracle.front(), w);
  }
  return rep;
}

void print_report(const VerificationReport& rep) {
  for (const auto& c : rep.checks) {
    std::string where;
    if (c.snr_db) where = " [" + param_label(*c.snr_db, *c.psi) + "]";
    std::printf("%s %s%s: %s = %.6g (threshold %.6g)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), where.c_str(),
                c.metric.c_str(), c.value, c.threshold);
  }
  for (const auto& n : rep.notes) std::printf("NOTE %s\n", n.c_str());
  std::printf("%s\n", rep.passed() ? "verification passed" : "verification FAILED");
}

int run(int argc, char** argv) {
  CLI::App app{"Interaural cue densities of N0S_psi stimuli: evaluation, export and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("interaural ") + kToolVersion);

  // joint
  auto* joint = app.add_subcommand("joint", "Evaluate a joint density on a grid (CSV, optional SVG)");
  std::string j_kind, j_psi, j_axis1, j_axis2 = "-pi:pi:361", j_out, j_svg;
  double j_snr = 0.0;
  unsigned j_workers = 1;
  joint->add_option("--kind", j_kind, "r-ipd or pow-ipd")->required()->check(CLI::IsMember({"r-ipd", "pow-ipd"}));
  joint->add_option("--snr", j_snr, "SNR in dB (noise variance 1)")->required();
  joint->add_option("--psi", j_psi, "tone IPD with unit, e.g. 90deg or pi/2rad")->required();
  joint->add_option("--axis1", j_axis1, "r or p'/C^2 axis lo:hi:n (default 0:10:401 or 0:4:401)");
  joint->add_option("--axis2", j_axis2, "IPD axis lo:hi:n")->capture_default_str();
  joint->add_option("-o,--out", j_out, "CSV output path")->required();
  joint->add_option("--svg", j_svg, "optional SVG heat map path");
  joint->add_option("--workers", j_workers, "threads")->capture_default_str();

  // marginal
  auto* marg = app.add_subcommand("marginal", "Marginal density curves, one column per (SNR, psi)");
  std::string m_which, m_axis, m_scale = "db", m_phase, m_out;
  std::vector<double> m_snrs;
  std::vector<std::string> m_psis;
  marg->add_option("--which", m_which, "ipd, iar, ild or pow")->required()->check(CLI::IsMember({"ipd", "iar", "ild", "pow"}));
  marg->add_option("--snr", m_snrs, "SNR list in dB")->required()->delimiter(',');
  marg->add_option("--psi", m_psis, "tone IPD list with units")->required()->delimiter(',');
  marg->add_option("--axis", m_axis, "axis lo:hi:n (default depends on --which)");
  marg->add_option("--pow-scale", m_scale, "P' axis: db or linear (P'/C^2)")->check(CLI::IsMember({"db", "linear"}))->capture_default_str();
  marg->add_option("--global-phase", m_phase, "extra whole-stimulus phase psi2 with unit (IPD curves shift)");
  marg->add_option("-o,--out", m_out, "CSV output path")->required();

  // verify
  auto* ver = app.add_subcommand("verify", "Run the verification suite; exit 0 on pass, 2 on failure");
  VerifyOptions v;
  ver->add_option("--snr", v.snrs, "SNR grid in dB")->delimiter(',')->capture_default_str();
  ver->add_option("--psi", v.psis, "psi grid with units")->delimiter(',')->capture_default_str();
  ver->add_option("--oracle", v.oracle_points, "sampling oracle points snr:angle")->delimiter(',')->capture_default_str();
  ver->add_option("--samples", v.samples, "i.i.d. samples per oracle point (0 disables)")->capture_default_str();
  ver->add_option("--identity-points", v.identity_points, "random points for the exact identities")->capture_default_str();
  ver->add_option("--waveform-duration", v.waveform_duration, "seconds of waveform for the end-to-end check (0 disables)")->capture_default_str();
  ver->add_option("--seed", v.seed, "random seed")->capture_default_str();
  ver->add_option("--workers", v.workers, "sampling threads")->capture_default_str();
  ver->add_option("-o,--out", v.out, "JSON report path");

  // synth
  auto* syn = app.add_subcommand("synth", "Synthesize a stimulus waveform (WAV) and its cue traces (CSV)");
  double s_snr = -10.0, s_f0 = 500.0, s_bw = 500.0, s_fs = 48000.0, s_dur = 1.0;
  std::string s_psi = "180deg", s_wav, s_cues;
  std::uint64_t s_seed = 1;
  std::size_t s_step = 1;
  bool s_no_noise = false;
  syn->add_option("--snr", s_snr, "SNR in dB")->capture_default_str();
  syn->add_option("--psi", s_psi, "tone IPD with unit")->capture_default_str();
  syn->add_option("--f0", s_f0, "tone and band centre frequency, Hz")->capture_default_str();
  syn->add_option("--bandwidth", s_bw, "noise bandwidth, Hz")->capture_default_str();
  syn->add_option("--fs", s_fs, "sample rate, Hz")->capture_default_str();
  syn->add_option("--duration", s_dur, "seconds")->capture_default_str();
  syn->add_option("--seed", s_seed, "random seed")->capture_default_str();
  syn->add_option("--wav", s_wav, "stereo float WAV output");
  syn->add_option("--cues", s_cues, "cue trace CSV output");
  syn->add_option("--trace-step", s_step, "write every n-th cue sample")->capture_default_str()->check(CLI::PositiveNumber);
  syn->add_flag("--no-noise", s_no_noise, "tone only");

  // figure
  auto* fig = app.add_subcommand("figure", "Write the data behind a figure (fig2, fig3, fig4)");
  std::string f_which;
  FigureOptions fo;
  std::string f_dir = "figures";
  std::vector<double> f_snrs;
  std::vector<std::string> f_psis;
  std::vector<double> f_fixed{-10.0, 10.0};
  std::vector<std::string> f_sweep{"45deg", "90deg", "135deg", "180deg"};
  fig->add_option("which", f_which, "fig2, fig3 or fig4")->required()->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
  fig->add_option("-o,--out-dir", f_dir, "output directory")->capture_default_str();
  fig->add_option("--snr", f_snrs, "override SNR list (dB)")->delimiter(',');
  fig->add_option("--psi", f_psis, "override psi list")->delimiter(',');
  fig->add_option("--fixed-snr", f_fixed, "fig3 (g-l): fixed SNRs")->delimiter(',')->capture_default_str();
  fig->add_option("--psi-sweep", f_sweep, "fig3 (g-l): psi values")->delimiter(',')->capture_default_str();
  fig->add_option("--seed", fo.seed, "seed for waveform estimates")->capture_default_str();
  fig->add_option("--duration", fo.duration_s, "fig2 waveform length, s")->capture_default_str();
  fig->add_option("--workers", fo.workers, "threads for grids")->capture_default_str();
  fig->add_flag("--svg", fo.svg, "also write SVG heat maps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitArgs;
  }

  if (*joint) {
    const JointKind kind = j_kind == "r-ipd" ? JointKind::r_ipd : JointKind::pow_ipd;
    const auto p = StimulusParams::from_snr_db(j_snr, io::parse_angle(j_psi));
    const AxisSpec a1 = parse_axis(!j_axis1.empty() ? j_axis1 : kind == JointKind::r_ipd ? "0:10:401" : "0:4:401");
    const AxisSpec a2 = parse_axis(j_axis2);
    if (a2.lo < -kPi - 1e-12 || a2.hi > kPi + 1e-12) throw std::invalid_argument("IPD axis must lie in [-pi, pi]");
    if (a1.lo < 0.0) throw std::invalid_argument("first axis must be non-negative");
    const AxisSpec a2c{std::max(a2.lo, -kPi), std::min(a2.hi, kPi), a2.n};
    const auto g = joint_grid(kind, p, a1, a2c, j_workers);
    write_joint(j_out, j_svg, kind, p, g, "joint");
    return 0;
  }
  if (*marg) {
    const MarginalKind which = parse_kind(m_which);
    const PowAxisScale scale = m_scale == "db" ? PowAxisScale::db : PowAxisScale::linear;
    std::vector<double> axis;
    if (!m_axis.empty()) {
      axis = parse_axis(m_axis).values();
    } else if (which == MarginalKind::pow && scale == PowAxisScale::linear) {
      axis = linspace(0.0, 4.0, 401);
    } else {
      axis = default_axis(which);
    }
    const double phase = m_phase.empty() ? 0.0 : io::parse_angle(m_phase);
    write_marginals(m_out, which, m_snrs, parse_angles(m_psis), axis, scale, phase, "marginal");
    return 0;
  }
  if (*ver) {
    const auto rep = run_verify(v);
    print_report(rep);
    if (!v.out.empty()) {
      auto os = open_out(v.out);
      os << rep.to_json().dump(2) << '\n';
    }
    return rep.passed() ? 0 : kExitVerifyFailed;
  }
  if (*syn) {
    const auto p = StimulusParams::from_snr_db(s_snr, io::parse_angle(s_psi));
    const auto stim = synthesize_waveform(p, s_fs, s_f0, s_bw, s_dur, s_seed, !s_no_noise);
    if (!s_wav.empty()) write_wav(s_wav, stim);
    if (!s_cues.empty()) {
      const auto full = extract_cues(stim);
      CueTrace tr;
      for (std::size_t i = 0; i < full.size(); i += s_step) {
        tr.time_s.push_back(full.time_s[i]);
        tr.ipd_rad.push_back(full.ipd_rad[i]);
        tr.ild_db.push_back(full.ild_db[i]);
        tr.power_p.push_back(full.power_p[i]);
      }
      auto meta = base_meta("synth");
      add_param_meta(meta, p);
      meta.emplace_back("sample_rate_hz", io::format_double(s_fs));
      meta.emplace_back("center_freq_hz", io::format_double(s_f0));
      meta.emplace_back("noise_bandwidth_hz", io::format_double(s_bw));
      meta.emplace_back("duration_s", io::format_double(s_dur));
      meta.emplace_back("seed", std::to_string(s_seed));
      meta.emplace_back("trace_step", std::to_string(s_step));
      auto os = open_out(s_cues);
      io::write_cue_trace_csv(os, tr, meta);
    }
    if (s_wav.empty() && s_cues.empty()) throw std::invalid_argument("synth needs --wav and/or --cues");
    return 0;
  }
  if (*fig) {
    fo.out_dir = f_dir;
    if (f_which == "fig2") {
      const auto snrs = f_snrs.empty() ? std::vector<double>{-10.0, 0.0, 10.0} : f_snrs;
      const auto psis = f_psis.empty() ? std::vector<double>{kPi, kPi / 2, kPi / 4} : parse_angles(f_psis);
      figure2(fo, snrs, psis);
    } else if (f_which == "fig3") {
      const auto snrs = f_snrs.empty() ? std::vector<double>{-20.0, -10.0, 0.0, 10.0, 20.0} : f_snrs;
      const auto psis = f_psis.empty() ? std::vector<double>{kPi, kPi / 2} : parse_angles(f_psis);
      figure3(fo, snrs, psis, f_fixed, parse_angles(f_sweep));
    } else {
      const auto snrs = f_snrs.empty() ? std::vector<double>{-10.0, 10.0} : f_snrs;
      const auto psis = f_psis.empty() ? std::vector<double>{kPi / 2, kPi} : parse_angles(f_psis);
      figure4(fo, snrs, psis);
    }
    return 0;
  }
  return kExitArgs;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const QuadratureError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitQuadrature;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitArgs;
  }
}
