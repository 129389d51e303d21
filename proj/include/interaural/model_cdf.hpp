#pragma once

// Model CDFs and cell probabilities used to compare the closed-form densities
// with sampled data. CDFs are tabulated by integrating the marginal density
// exactly over each table cell and interpolating linearly inside a cell.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "interaural/marginals.hpp"
#include "interaural/quadrature.hpp"
#include "interaural/stimulus.hpp"

namespace interaural {

class TabulatedCdf {
 public:
  TabulatedCdf(std::vector<double> nodes, std::vector<double> cdf)
      : nodes_(std::move(nodes)), cdf_(std::move(cdf)) {
    if (nodes_.size() < 2 || nodes_.size() != cdf_.size()) {
      throw std::invalid_argument("CDF table needs at least two matching nodes");
    }
  }

  double operator()(double x) const {
    if (x <= nodes_.front()) return cdf_.front();
    if (x >= nodes_.back()) return cdf_.back();
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
    const double t = (x - nodes_[j - 1]) / (nodes_[j] - nodes_[j - 1]);
    return cdf_[j - 1] + t * (cdf_[j] - cdf_[j - 1]);
  }

  double quantile(double q) const {
    if (q <= cdf_.front()) return nodes_.front();
    if (q >= cdf_.back()) return nodes_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), q);
    const std::size_t j = static_cast<std::size_t>(it - cdf_.begin());
    const double span = cdf_[j] - cdf_[j - 1];
    const double t = span > 0.0 ? (q - cdf_[j - 1]) / span : 0.0;
    return nodes_[j - 1] + t * (nodes_[j] - nodes_[j - 1]);
  }

  /// Probability below the first node and above the last.
  double lower_tail() const { return cdf_.front(); }
  double upper_tail() const { return 1.0 - cdf_.back(); }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return cdf_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> cdf_;
};

namespace detail {

template <class Density>
TabulatedCdf tabulate_cdf(std::vector<double> nodes, double mass_below, Density&& density,
                          const std::vector<double>& breaks, const QuadratureConfig& cfg) {
  std::vector<double> cdf(nodes.size());
  cdf[0] = mass_below;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    std::vector<double> pts{nodes[k - 1], nodes[k]};
    for (double b : breaks) {
      if (b > nodes[k - 1] && b < nodes[k]) pts.push_back(b);
    }
    sort_unique(pts);
    const auto r = integrate_pieces(density, pts, cfg);
    cdf[k] = cdf[k - 1] + value_or_throw(r, "tabulate_cdf");
  }
  return TabulatedCdf(std::move(nodes), std::move(cdf));
}

inline QuadratureConfig table_config() {
  QuadratureConfig cfg;
  cfg.epsabs = 1e-12;
  cfg.epsrel = 1e-8;
  return cfg;
}

}  // namespace detail

/// CDF of the IPD on [-pi, pi].
inline TabulatedCdf ipd_model_cdf(const StimulusParams& params, std::size_t cells = 4096) {
  const auto cfg = detail::table_config();
  auto density = [&](double d) { return marginal_ipd(params, d, IpdRoute::via_r); };
  return detail::tabulate_cdf(linspace(-kPi, kPi, cells + 1), 0.0, density,
                              ipd_breakpoints(params), cfg);
}

/// CDF of the ILD on [-range_db, range_db].
inline TabulatedCdf ild_model_cdf(const StimulusParams& params, double range_db = 80.0,
                                  std::size_t cells = 4096) {
  const auto cfg = detail::table_config();
  auto density = [&](double dl) { return marginal_ild(params, dl); };
  const auto below = integrate_semi_infinite_below(density, -range_db, cfg);
  return detail::tabulate_cdf(linspace(-range_db, range_db, cells + 1),
                              detail::value_or_throw(below, "ild_model_cdf"), density,
                              {0.0}, cfg);
}

/// CDF of the IAR with nodes spaced uniformly in dB over [-range_db, range_db].
inline TabulatedCdf iar_model_cdf(const StimulusParams& params, double range_db = 80.0,
                                  std::size_t cells = 4096) {
  const auto cfg = detail::table_config();
  std::vector<double> nodes = linspace(-range_db, range_db, cells + 1);
  for (double& x : nodes) x = iar_from_ild(x);
  auto density = [&](double r) { return marginal_iar(params, r); };
  const auto below = integrate_finite(density, 0.0, nodes.front(), cfg);
  return detail::tabulate_cdf(std::move(nodes), detail::value_or_throw(below, "iar_model_cdf"),
                              density, {1.0}, cfg);
}

/// CDF of P' with nodes spaced uniformly in 10 log10(p / C^2) over [lo_db, hi_db].
/// The support corner a^2 (log peak of the density) is always a node.
inline TabulatedCdf pow_model_cdf(const StimulusParams& params, double lo_db = -100.0,
                                  double hi_db = 40.0, std::size_t cells = 4096) {
  const auto cfg = detail::table_config();
  const double c2 = params.tone_power();
  std::vector<double> nodes = linspace(lo_db, hi_db, cells + 1);
  for (double& x : nodes) x = c2 * std::pow(10.0, x / 10.0);
  const double a2 = params.half_chord_sq();
  if (a2 > nodes.front() && a2 < nodes.back()) {
    nodes.push_back(a2);
    detail::sort_unique(nodes);
  }
  auto density = [&](double p) { return marginal_pow(params, p); };
  const auto below = integrate_finite(density, 0.0, nodes.front(), cfg);
  return detail::tabulate_cdf(std::move(nodes), detail::value_or_throw(below, "pow_model_cdf"),
                              density, {}, cfg);
}

/// Probability of the (r, dphi) cell [r0, r1] x [d0, d1].
inline double r_ipd_cell_mass(const StimulusParams& params, double r0, double r1, double d0,
                              double d1, const QuadratureConfig& cfg = detail::table_config()) {
  const auto rbreaks = iar_breakpoints();
  std::vector<double> rpts{r0, r1};
  for (double b : rbreaks) {
    if (b > r0 && b < r1) rpts.push_back(b);
  }
  detail::sort_unique(rpts);
  std::vector<double> dpts{d0, d1};
  for (double b : ipd_breakpoints(params)) {
    if (b > d0 && b < d1) dpts.push_back(b);
  }
  detail::sort_unique(dpts);
  auto inner = [&](double dphi) {
    auto f = [&](double r) { return joint_r_ipd_pdf(params, r, dphi); };
    return detail::value_or_throw(integrate_pieces(f, rpts, cfg), "r_ipd_cell_mass");
  };
  return detail::value_or_throw(integrate_pieces(inner, dpts, cfg), "r_ipd_cell_mass");
}

/// Probability of the (p', dphi) cell [p0, p1] x [d0, d1], clipped to the support.
inline double pow_ipd_cell_mass(const StimulusParams& params, double p0, double p1, double d0,
                                double d1, const QuadratureConfig& cfg = detail::table_config()) {
  std::vector<double> dpts{d0, d1};
  for (double b : ipd_breakpoints(params)) {
    if (b > d0 && b < d1) dpts.push_back(b);
  }
  // Where the support boundary crosses the cell's P' edges the inner integral has a kink.
  for (double p : {p0, p1}) {
    if (p > 0.0) {
      const double w = support_phi_hat(params, p);
      for (double b : {-w, w}) {
        if (b > d0 && b < d1) dpts.push_back(b);
      }
    }
  }
  detail::sort_unique(dpts);
  auto inner = [&](double dphi) {
    return detail::value_or_throw(pow_ipd_slice_integral(params, dphi, p0, p1, cfg),
                                  "pow_ipd_cell_mass");
  };
  return detail::value_or_throw(integrate_pieces(inner, dpts, cfg), "pow_ipd_cell_mass");
}

}  // namespace interaural
