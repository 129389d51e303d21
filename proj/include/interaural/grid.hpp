#pragma once

// Rectangular evaluation grids of the joint densities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "interaural/stimulus.hpp"

namespace interaural {

/// Stored in place of a density where the point lies outside the support.
inline constexpr double kUndefinedDensity = -1.0;

enum class JointKind { r_ipd, pow_ipd };

inline std::string_view to_string(JointKind k) {
  return k == JointKind::r_ipd ? "r-ipd" : "pow-ipd";
}

struct PdfGrid {
  std::string axis1_name;
  std::string axis2_name;
  std::vector<double> axis1;
  std::vector<double> axis2;
  std::vector<double> values;  // row-major, index i1 * axis2.size() + i2

  double at(std::size_t i1, std::size_t i2) const { return values[i1 * axis2.size() + i2]; }
  double& at(std::size_t i1, std::size_t i2) { return values[i1 * axis2.size() + i2]; }

  void validate() const {
    auto increasing = [](const std::vector<double>& a) {
      for (std::size_t i = 1; i < a.size(); ++i) {
        if (!(a[i] > a[i - 1])) return false;
      }
      return !a.empty();
    };
    if (!increasing(axis1) || !increasing(axis2)) {
      throw std::invalid_argument("grid axes must be non-empty and strictly increasing");
    }
    if (values.size() != axis1.size() * axis2.size()) {
      throw std::invalid_argument("grid values do not match the axes");
    }
    for (double v : values) {
      if (!(v >= 0.0 || v == kUndefinedDensity)) {
        throw std::invalid_argument("grid values must be non-negative or the undefined sentinel");
      }
    }
  }

  /// Sum of value * cell area over defined cells, cells centred on the nodes.
  double riemann_mass() const {
    auto widths = [](const std::vector<double>& a) {
      std::vector<double> w(a.size(), 0.0);
      if (a.size() < 2) return w;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double lo = i == 0 ? a[0] : 0.5 * (a[i - 1] + a[i]);
        const double hi = i + 1 == a.size() ? a[i] : 0.5 * (a[i] + a[i + 1]);
        w[i] = hi - lo;
      }
      return w;
    };
    const auto w1 = widths(axis1);
    const auto w2 = widths(axis2);
    double s = 0.0;
    for (std::size_t i = 0; i < axis1.size(); ++i) {
      for (std::size_t j = 0; j < axis2.size(); ++j) {
        const double v = at(i, j);
        if (v > 0.0) s += v * w1[i] * w2[j];
      }
    }
    return s;
  }
};

/// Evaluates a joint density on axis1 x axis2 (r or p' by dphi). Rows are
/// split across `workers` threads; the result does not depend on the count.
inline PdfGrid compute_joint_grid(JointKind kind, const StimulusParams& params,
                                  std::vector<double> axis1, std::vector<double> axis2,
                                  unsigned workers = 1) {
  PdfGrid g;
  g.axis1_name = kind == JointKind::r_ipd ? "r" : "p";
  g.axis2_name = "ipd";
  g.axis1 = std::move(axis1);
  g.axis2 = std::move(axis2);
  g.values.assign(g.axis1.size() * g.axis2.size(), 0.0);
  auto row = [&](std::size_t i) {
    for (std::size_t j = 0; j < g.axis2.size(); ++j) {
      const double x = g.axis1[i];
      const double d = g.axis2[j];
      if (kind == JointKind::r_ipd) {
        g.at(i, j) = joint_r_ipd_pdf(params, x, d);
      } else {
        g.at(i, j) = joint_pow_ipd_pdf(params, x, d).value_or(kUndefinedDensity);
      }
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < g.axis1.size(); ++i) row(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < g.axis1.size(); i += workers) row(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  return g;
}

}  // namespace interaural
