#pragma once

// Adaptive 1-D quadrature in the style of QUADPACK's QAGS / QAGI.
//
// integrate_finite() bisects the interval with the largest error estimate,
// applies a 21-point Gauss-Kronrod rule to each half and accelerates the
// sequence of partial sums with Wynn's epsilon algorithm. The extrapolation
// is what makes integrable endpoint singularities such as 1/sqrt(b - x)
// converge quickly. integrate_semi_infinite() maps [a, inf) onto (0, 1].

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace interaural {

struct QuadratureConfig {
  double epsabs = 1e-10;
  double epsrel = 1e-8;
  std::size_t max_subintervals = 200;
};

/// Status codes follow the QUADPACK `ier` convention.
enum class QuadratureStatus {
  ok = 0,
  subinterval_limit = 1,
  roundoff = 2,
  bad_integrand = 3,
  extrapolation_failed = 4,
  divergent = 5,
  invalid_input = 6,
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
  QuadratureStatus status = QuadratureStatus::ok;
};

/// Thrown by callers that cannot accept a non-converged integral.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208977036184, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// 10-point Gauss weights; its nodes are the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline constexpr double kEpmach = std::numeric_limits<double>::epsilon();
inline constexpr double kUflow = std::numeric_limits<double>::min();
inline constexpr double kOflow = std::numeric_limits<double>::max();

struct RuleEstimate {
  double result;
  double abserr;
  double resabs;  // integral of |f|
  double resasc;  // integral of |f - mean|
};

template <class F>
RuleEstimate gauss_kronrod21(F& f, double a, double b) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  std::array<double, 10> fv1{};
  std::array<double, 10> fv2{};
  double resg = 0.0;
  const double fc = f(centr);
  double resk = kKronrodWeights[10] * fc;
  double resabs = std::abs(resk);
  for (std::size_t j = 0; j < 5; ++j) {
    const std::size_t jtw = 2 * j + 1;
    const double absc = hlgth * kKronrodNodes[jtw];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kGaussWeights[j] * (f1 + f2);
    resk += kKronrodWeights[jtw] * (f1 + f2);
    resabs += kKronrodWeights[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (std::size_t j = 0; j < 5; ++j) {
    const std::size_t jtwm1 = 2 * j;
    const double absc = hlgth * kKronrodNodes[jtwm1];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kKronrodWeights[jtwm1] * (f1 + f2);
    resabs += kKronrodWeights[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = resk * 0.5;
  double resasc = kKronrodWeights[10] * std::abs(fc - reskh);
  for (std::size_t j = 0; j < 10; ++j) {
    resasc += kKronrodWeights[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  RuleEstimate est{resk * hlgth, std::abs((resk - resg) * hlgth), resabs * dhlgth,
                   resasc * dhlgth};
  if (est.resasc != 0.0 && est.abserr != 0.0) {
    est.abserr = est.resasc * std::min(1.0, std::pow(200.0 * est.abserr / est.resasc, 1.5));
  }
  if (est.resabs > kUflow / (50.0 * kEpmach)) {
    est.abserr = std::max(kEpmach * 50.0 * est.resabs, est.abserr);
  }
  return est;
}

// Wynn's epsilon algorithm (QUADPACK dqelg). `table` is 1-based with 52+1
// slots, `n` the number of live entries; `last3` holds the previous three
// extrapolated values.
struct EpsilonTable {
  std::array<double, 53> table{};
  std::array<double, 4> last3{};
  int n = 0;
  int nres = 0;

  void extrapolate(double& result, double& abserr) {
    constexpr int kLimexp = 50;
    ++nres;
    abserr = kOflow;
    result = table[n];
    if (n < 3) {
      abserr = std::max(abserr, 5.0 * kEpmach * std::abs(result));
      return;
    }
    table[n + 2] = table[n];
    const int newelm = (n - 1) / 2;
    table[n] = kOflow;
    const int num = n;
    int k1 = n;
    bool converged_early = false;
    for (int i = 1; i <= newelm; ++i) {
      const int k2 = k1 - 1;
      const int k3 = k1 - 2;
      double res = table[k1 + 2];
      const double e0 = table[k3];
      const double e1 = table[k2];
      const double e2 = res;
      const double e1abs = std::abs(e1);
      const double delta2 = e2 - e1;
      const double err2 = std::abs(delta2);
      const double tol2 = std::max(std::abs(e2), e1abs) * kEpmach;
      const double delta3 = e1 - e0;
      const double err3 = std::abs(delta3);
      const double tol3 = std::max(e1abs, std::abs(e0)) * kEpmach;
      if (err2 <= tol2 && err3 <= tol3) {
        // e0, e1, e2 agree to machine accuracy.
        result = res;
        abserr = err2 + err3;
        converged_early = true;
        break;
      }
      const double e3 = table[k1];
      table[k1] = e1;
      const double delta1 = e1 - e3;
      const double err1 = std::abs(delta1);
      const double tol1 = std::max(e1abs, std::abs(e3)) * kEpmach;
      if (err1 <= tol1 || err2 <= tol2 || err3 <= tol3) {
        n = i + i - 1;
        break;
      }
      const double ss = 1.0 / delta1 + 1.0 / delta2 - 1.0 / delta3;
      const double epsinf = std::abs(ss * e1);
      if (epsinf <= 1e-4) {
        n = i + i - 1;
        break;
      }
      res = e1 + 1.0 / ss;
      table[k1] = res;
      k1 -= 2;
      const double error = err2 + std::abs(res - e2) + err3;
      if (error <= abserr) {
        abserr = error;
        result = res;
      }
    }
    if (converged_early) {
      abserr = std::max(abserr, 5.0 * kEpmach * std::abs(result));
      return;
    }
    if (n == kLimexp) n = 2 * (kLimexp / 2) - 1;
    int ib = (num % 2 == 0) ? 2 : 1;
    const int ie = newelm + 1;
    for (int i = 1; i <= ie; ++i) {
      const int ib2 = ib + 2;
      table[ib] = table[ib2];
      ib = ib2;
    }
    if (num != n) {
      int indx = num - n + 1;
      for (int i = 1; i <= n; ++i) {
        table[i] = table[indx];
        ++indx;
      }
    }
    if (nres < 4) {
      last3[nres] = result;
      abserr = kOflow;
    } else {
      abserr = std::abs(result - last3[3]) + std::abs(result - last3[2]) +
               std::abs(result - last3[1]);
      last3[1] = last3[2];
      last3[2] = last3[3];
      last3[3] = result;
    }
    abserr = std::max(abserr, 5.0 * kEpmach * std::abs(result));
  }
};

// Keeps iord[1..] ordered by decreasing error so that iord[nrmax] is the
// interval to bisect next (QUADPACK dqpsrt).
inline void reorder_errors(int limit, int last, int& maxerr, double& ermax,
                           std::span<const double> elist, std::span<int> iord, int& nrmax) {
  if (last <= 2) {
    iord[1] = 1;
    iord[2] = 2;
  } else {
    const double errmax = elist[maxerr];
    if (nrmax != 1) {
      const int ido = nrmax - 1;
      for (int i = 1; i <= ido; ++i) {
        const int isucc = iord[nrmax - 1];
        if (errmax <= elist[isucc]) break;
        iord[nrmax] = isucc;
        --nrmax;
      }
    }
    int jupbn = last;
    if (last > limit / 2 + 2) jupbn = limit + 3 - last;
    const double errmin = elist[last];
    const int jbnd = jupbn - 1;
    const int ibeg = nrmax + 1;
    int i = ibeg;
    bool inserted = false;
    for (; i <= jbnd; ++i) {
      const int isucc = iord[i];
      if (errmax >= elist[isucc]) {
        inserted = true;
        break;
      }
      iord[i - 1] = isucc;
    }
    if (!inserted) {
      iord[jbnd] = maxerr;
      iord[jupbn] = last;
    } else {
      iord[i - 1] = maxerr;
      int k = jbnd;
      bool placed = false;
      for (int j = i; j <= jbnd; ++j) {
        const int isucc = iord[k];
        if (errmin < elist[isucc]) {
          iord[k + 1] = last;
          placed = true;
          break;
        }
        iord[k + 1] = isucc;
        --k;
      }
      if (!placed) iord[i] = last;
    }
  }
  maxerr = iord[nrmax];
  ermax = elist[maxerr];
}

template <class F>
QuadratureResult adaptive_extrapolated(F& f, double a, double b, const QuadratureConfig& cfg) {
  QuadratureResult out;
  const int limit = static_cast<int>(std::max<std::size_t>(cfg.max_subintervals, 1));
  const double epsabs = cfg.epsabs;
  const double epsrel = cfg.epsrel;
  if (epsabs <= 0.0 && epsrel < std::max(50.0 * kEpmach, 0.5e-28)) {
    out.status = QuadratureStatus::invalid_input;
    return out;
  }

  std::vector<double> alist(limit + 1), blist(limit + 1), rlist(limit + 1), elist(limit + 1);
  std::vector<int> iord(limit + 2, 0);
  int ier = 0;
  int ierro = 0;
  int last = 1;

  alist[1] = a;
  blist[1] = b;
  const RuleEstimate first = gauss_kronrod21(f, a, b);
  double result = first.result;
  double abserr = first.abserr;
  const double defabs = first.resabs;
  const double resabs0 = first.resasc;
  double dres = std::abs(result);
  double errbnd = std::max(epsabs, epsrel * dres);
  rlist[1] = result;
  elist[1] = abserr;
  iord[1] = 1;
  if (abserr <= 100.0 * kEpmach * defabs && abserr > errbnd) ier = 2;
  if (limit == 1) ier = 1;

  auto finish = [&](double value, double err, int code) {
    if (code > 2) --code;
    out.value = value;
    out.abs_error_estimate = err;
    out.status = static_cast<QuadratureStatus>(code);
    out.converged = code == 0;
    out.evaluations = static_cast<std::size_t>(42 * last - 21);
    return out;
  };

  if (ier != 0 || (abserr <= errbnd && abserr != resabs0) || abserr == 0.0) {
    return finish(result, abserr, ier);
  }

  EpsilonTable eps;
  eps.table[1] = result;
  double errmax = abserr;
  int maxerr = 1;
  double area = result;
  double errsum = abserr;
  abserr = kOflow;
  int nrmax = 1;
  eps.n = 2;
  int ktmin = 0;
  bool extrap = false;
  bool noext = false;
  int iroff1 = 0, iroff2 = 0, iroff3 = 0;
  int ksgn = (dres >= (1.0 - 50.0 * kEpmach) * defabs) ? 1 : -1;
  double small = 0.0, erlarg = 0.0, ertest = 0.0, correc = 0.0;

  bool sum_rlist = false;  // label 115 in the reference routine
  bool skip_checks = false;
  for (last = 2; last <= limit; ++last) {
    const double a1 = alist[maxerr];
    const double b1 = 0.5 * (alist[maxerr] + blist[maxerr]);
    const double a2 = b1;
    const double b2 = blist[maxerr];
    const double erlast = errmax;
    const RuleEstimate left = gauss_kronrod21(f, a1, b1);
    const RuleEstimate right = gauss_kronrod21(f, a2, b2);

    const double area12 = left.result + right.result;
    const double erro12 = left.abserr + right.abserr;
    errsum = errsum + erro12 - errmax;
    area = area + area12 - rlist[maxerr];
    if (left.resasc != left.abserr && right.resasc != right.abserr) {
      if (std::abs(rlist[maxerr] - area12) <= 1e-5 * std::abs(area12) &&
          erro12 >= 0.99 * errmax) {
        if (extrap) {
          ++iroff2;
        } else {
          ++iroff1;
        }
      }
      if (last > 10 && erro12 > errmax) ++iroff3;
    }
    rlist[maxerr] = left.result;
    rlist[last] = right.result;
    errbnd = std::max(epsabs, epsrel * std::abs(area));

    if (iroff1 + iroff2 >= 10 || iroff3 >= 20) ier = 2;
    if (iroff2 >= 5) ierro = 3;
    if (last == limit) ier = 1;
    if (std::max(std::abs(a1), std::abs(b2)) <= (1.0 + 100.0 * kEpmach) * (std::abs(a2) + 1000.0 * kUflow)) {
      ier = 4;
    }

    if (right.abserr > left.abserr) {
      alist[maxerr] = a2;
      alist[last] = a1;
      blist[last] = b1;
      rlist[maxerr] = right.result;
      rlist[last] = left.result;
      elist[maxerr] = right.abserr;
      elist[last] = left.abserr;
    } else {
      alist[last] = a2;
      blist[maxerr] = b1;
      blist[last] = b2;
      elist[maxerr] = left.abserr;
      elist[last] = right.abserr;
    }
    reorder_errors(limit, last, maxerr, errmax, elist, iord, nrmax);

    if (errsum <= errbnd) {
      sum_rlist = true;
      skip_checks = true;
      break;
    }
    if (ier != 0) break;
    if (last == 2) {
      small = std::abs(b - a) * 0.375;
      erlarg = errsum;
      ertest = errbnd;
      eps.table[2] = area;
      continue;
    }
    if (noext) continue;
    erlarg -= erlast;
    if (std::abs(b1 - a1) > small) erlarg += erro12;
    if (!extrap) {
      if (std::abs(blist[maxerr] - alist[maxerr]) > small) continue;
      extrap = true;
      nrmax = 2;
    }
    bool bisect_large = false;
    if (ierro != 3 && erlarg > ertest) {
      // Prefer bisecting large intervals before the next extrapolation.
      const int id = nrmax;
      int jupbnd = last;
      if (last > 2 + limit / 2) jupbnd = limit + 3 - last;
      for (int k = id; k <= jupbnd; ++k) {
        maxerr = iord[nrmax];
        errmax = elist[maxerr];
        if (std::abs(blist[maxerr] - alist[maxerr]) > small) {
          bisect_large = true;
          break;
        }
        ++nrmax;
      }
    }
    if (bisect_large) continue;

    ++eps.n;
    eps.table[eps.n] = area;
    double reseps = 0.0, abseps = 0.0;
    eps.extrapolate(reseps, abseps);
    ++ktmin;
    if (ktmin > 5 && abserr < 1e-3 * errsum) ier = 5;
    if (abseps < abserr) {
      ktmin = 0;
      abserr = abseps;
      result = reseps;
      correc = erlarg;
      ertest = std::max(epsabs, epsrel * std::abs(reseps));
      if (abserr <= ertest) break;
    }
    if (eps.n == 1) noext = true;
    if (ier == 5) break;
    maxerr = iord[1];
    errmax = elist[maxerr];
    nrmax = 1;
    extrap = false;
    small *= 0.5;
    erlarg = errsum;
  }
  if (last > limit) last = limit;

  if (!skip_checks) {
    // label 100: decide between the extrapolated and the summed result.
    if (abserr == kOflow) {
      sum_rlist = true;
    } else if (ier + ierro == 0) {
      if (!(ksgn == -1 && std::max(std::abs(result), std::abs(area)) <= defabs * 0.01)) {
        if (0.01 > result / area || result / area > 100.0 || errsum > std::abs(area)) ier = 6;
      }
      return finish(result, abserr, ier);
    } else {
      if (ierro == 3) abserr += correc;
      if (ier == 0) ier = 3;
      bool goto110 = false;
      if (result != 0.0 && area != 0.0) {
        if (abserr / std::abs(result) > errsum / std::abs(area)) {
          sum_rlist = true;
        } else {
          goto110 = true;
        }
      } else if (abserr > errsum) {
        sum_rlist = true;
      } else if (area == 0.0) {
        return finish(result, abserr, ier);
      } else {
        goto110 = true;
      }
      if (goto110) {
        if (!(ksgn == -1 && std::max(std::abs(result), std::abs(area)) <= defabs * 0.01)) {
          if (0.01 > result / area || result / area > 100.0 || errsum > std::abs(area)) ier = 6;
        }
        return finish(result, abserr, ier);
      }
    }
  }
  if (sum_rlist) {
    result = 0.0;
    for (int k = 1; k <= last; ++k) result += rlist[k];
    abserr = errsum;
  }
  return finish(result, abserr, ier);
}

}  // namespace detail

/// Integrates f over [a, b]. Integrable endpoint singularities are allowed;
/// the integrand is never evaluated at a or b.
template <class F>
QuadratureResult integrate_finite(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
  if (!(a < b)) {
    if (a == b) return QuadratureResult{0.0, 0.0, 0, true, QuadratureStatus::ok};
    QuadratureResult r = integrate_finite(f, b, a, cfg);
    r.value = -r.value;
    return r;
  }
  return detail::adaptive_extrapolated(f, a, b, cfg);
}

/// Integrates f over [a, inf) through x = a + (1 - t) / t, t in (0, 1].
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, double a, const QuadratureConfig& cfg = {}) {
  auto mapped = [&f, a](double t) {
    const double x = a + (1.0 - t) / t;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v / (t * t);
  };
  return detail::adaptive_extrapolated(mapped, 0.0, 1.0, cfg);
}

/// Integrates f over (-inf, b] by reflection onto a semi-infinite range.
template <class F>
QuadratureResult integrate_semi_infinite_below(F&& f, double b, const QuadratureConfig& cfg = {}) {
  return integrate_semi_infinite([&f, b](double u) { return f(2.0 * b - u); }, b, cfg);
}

/// Sums integrate_finite over consecutive pieces of `points` (sorted,
/// at least two entries). The absolute tolerance is shared between pieces.
template <class F>
QuadratureResult integrate_pieces(F&& f, std::span<const double> points,
                                  const QuadratureConfig& cfg = {}) {
  QuadratureResult total{0.0, 0.0, 0, true, QuadratureStatus::ok};
  if (points.size() < 2) return total;
  QuadratureConfig piece_cfg = cfg;
  piece_cfg.epsabs = cfg.epsabs / static_cast<double>(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i] < points[i + 1])) continue;
    const QuadratureResult r = integrate_finite(f, points[i], points[i + 1], piece_cfg);
    total.value += r.value;
    total.abs_error_estimate += r.abs_error_estimate;
    total.evaluations += r.evaluations;
    if (!r.converged) {
      total.converged = false;
      if (total.status == QuadratureStatus::ok) total.status = r.status;
    }
  }
  return total;
}

/// Adds a semi-infinite tail result into an accumulated piecewise result.
inline void accumulate(QuadratureResult& total, const QuadratureResult& part) {
  total.value += part.value;
  total.abs_error_estimate += part.abs_error_estimate;
  total.evaluations += part.evaluations;
  if (!part.converged) {
    if (total.converged) total.status = part.status;
    total.converged = false;
  }
}

}  // namespace interaural
