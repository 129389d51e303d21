#pragma once

// Uniform-bin histograms and the two distances used to compare empirical
// samples with model densities: the Kolmogorov-Smirnov statistic and the
// total-variation distance over a 2-D cell partition.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace interaural {

class Histogram1D {
 public:
  Histogram1D(double lo, double hi, std::size_t bins) : lo_(lo), hi_(hi), counts_(bins, 0) {
    if (!(lo < hi) || bins == 0) throw std::invalid_argument("histogram needs lo < hi and bins > 0");
  }

  void add(double v) {
    ++total_;
    if (!(v >= lo_ && v <= hi_)) return;
    auto i = static_cast<std::size_t>((v - lo_) / width());
    if (i >= counts_.size()) i = counts_.size() - 1;
    ++counts_[i];
    ++in_range_;
  }

  void add(std::span<const double> values) {
    for (double v : values) add(v);
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t bins() const { return counts_.size(); }
  double width() const { return (hi_ - lo_) / static_cast<double>(counts_.size()); }
  double edge(std::size_t i) const { return lo_ + width() * static_cast<double>(i); }
  double center(std::size_t i) const { return lo_ + width() * (static_cast<double>(i) + 0.5); }
  std::uint64_t count(std::size_t i) const { return counts_[i]; }
  std::uint64_t total() const { return total_; }
  std::uint64_t in_range() const { return in_range_; }

  /// Density normalized over the binned range.
  std::vector<double> density() const {
    std::vector<double> d(counts_.size(), 0.0);
    if (in_range_ == 0) return d;
    const double norm = 1.0 / (static_cast<double>(in_range_) * width());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<double>(counts_[i]) * norm;
    return d;
  }

 private:
  double lo_;
  double hi_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::uint64_t in_range_ = 0;
};

class Histogram2D {
 public:
  Histogram2D(double xlo, double xhi, std::size_t xbins, double ylo, double yhi, std::size_t ybins)
      : xlo_(xlo), xhi_(xhi), ylo_(ylo), yhi_(yhi), xbins_(xbins), ybins_(ybins),
        counts_(xbins * ybins, 0) {
    if (!(xlo < xhi) || !(ylo < yhi) || xbins == 0 || ybins == 0) {
      throw std::invalid_argument("histogram needs lo < hi and bins > 0 on both axes");
    }
  }

  void add(double x, double y) {
    ++total_;
    if (!(x >= xlo_ && x <= xhi_ && y >= ylo_ && y <= yhi_)) return;
    auto i = static_cast<std::size_t>((x - xlo_) / xwidth());
    auto j = static_cast<std::size_t>((y - ylo_) / ywidth());
    if (i >= xbins_) i = xbins_ - 1;
    if (j >= ybins_) j = ybins_ - 1;
    ++counts_[i * ybins_ + j];
    ++in_range_;
  }

  std::size_t xbins() const { return xbins_; }
  std::size_t ybins() const { return ybins_; }
  double xwidth() const { return (xhi_ - xlo_) / static_cast<double>(xbins_); }
  double ywidth() const { return (yhi_ - ylo_) / static_cast<double>(ybins_); }
  double xedge(std::size_t i) const { return i == xbins_ ? xhi_ : xlo_ + xwidth() * static_cast<double>(i); }
  double yedge(std::size_t j) const { return j == ybins_ ? yhi_ : ylo_ + ywidth() * static_cast<double>(j); }
  std::uint64_t count(std::size_t i, std::size_t j) const { return counts_[i * ybins_ + j]; }
  std::uint64_t total() const { return total_; }
  std::uint64_t in_range() const { return in_range_; }

  /// Density normalized over the binned rectangle, row-major in x.
  std::vector<double> density() const {
    std::vector<double> d(counts_.size(), 0.0);
    if (in_range_ == 0) return d;
    const double norm = 1.0 / (static_cast<double>(in_range_) * xwidth() * ywidth());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = static_cast<double>(counts_[k]) * norm;
    return d;
  }

 private:
  double xlo_, xhi_, ylo_, yhi_;
  std::size_t xbins_, ybins_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::uint64_t in_range_ = 0;
};

/// Two-sided KS statistic of raw samples against a model CDF.
template <class Cdf>
double ks_statistic(std::span<const double> samples, Cdf&& cdf) {
  if (samples.empty()) throw std::invalid_argument("KS statistic needs samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, f - lo, hi - f});
  }
  return d;
}

/// Two-sample KS statistic.
inline double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS statistic needs samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Total-variation distance between the empirical distribution in `hist` and
/// a model whose probability of each cell is `cell_mass(x0, x1, y0, y1)`.
/// Mass outside the binned rectangle counts as one extra cell on both sides.
template <class CellMass>
  requires std::invocable<CellMass&, double, double, double, double>
double tv_distance(const Histogram2D& hist, CellMass&& cell_mass) {
  const double n = static_cast<double>(hist.total());
  if (n == 0.0) throw std::invalid_argument("TV distance needs samples");
  double sum = 0.0;
  double model_total = 0.0;
  for (std::size_t i = 0; i < hist.xbins(); ++i) {
    for (std::size_t j = 0; j < hist.ybins(); ++j) {
      const double m = cell_mass(hist.xedge(i), hist.xedge(i + 1), hist.yedge(j), hist.yedge(j + 1));
      model_total += m;
      sum += std::abs(static_cast<double>(hist.count(i, j)) / n - m);
    }
  }
  const double emp_out = static_cast<double>(hist.total() - hist.in_range()) / n;
  const double model_out = std::max(0.0, 1.0 - model_total);
  sum += std::abs(emp_out - model_out);
  return 0.5 * sum;
}

/// TV distance between two histograms on the same grid.
inline double tv_distance(const Histogram2D& a, const Histogram2D& b) {
  if (a.xbins() != b.xbins() || a.ybins() != b.ybins()) {
    throw std::invalid_argument("histograms must share a grid");
  }
  const double na = static_cast<double>(a.total());
  const double nb = static_cast<double>(b.total());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.xbins(); ++i) {
    for (std::size_t j = 0; j < a.ybins(); ++j) {
      sum += std::abs(static_cast<double>(a.count(i, j)) / na - static_cast<double>(b.count(i, j)) / nb);
    }
  }
  sum += std::abs(static_cast<double>(a.total() - a.in_range()) / na -
                  static_cast<double>(b.total() - b.in_range()) / nb);
  return 0.5 * sum;
}

}  // namespace interaural
