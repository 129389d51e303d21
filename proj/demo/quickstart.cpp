// Evaluates the joint and marginal IPD densities for an antiphasic tone in
// noise and compares them with a small Monte-Carlo run.

#include <cstdio>

#include "interaural/histogram.hpp"
#include "interaural/marginals.hpp"
#include "interaural/model_cdf.hpp"
#include "interaural/sampler.hpp"

int main() {
  using namespace interaural;
  const auto params = StimulusParams::from_snr_db(-10.0, kPi);

  std::printf("f(r=1, ipd=pi/2)  = %.6f\n", joint_r_ipd_pdf(params, 1.0, kPi / 2));
  std::printf("f_ipd(pi/2)       = %.6f (via r), %.6f (via p')\n",
              marginal_ipd(params, kPi / 2, IpdRoute::via_r), marginal_ipd(params, kPi / 2, IpdRoute::via_p));

  const auto m = circular_moments(params);
  std::printf("circular mean %.4f rad, circular variance %.4f\n", m.circular_mean, m.circular_variance);

  const auto samples = sample_interaural(params, 200000, 7);
  std::vector<double> ipd;
  ipd.reserve(samples.size());
  for (const auto& s : samples) ipd.push_back(s.ipd_phi);
  std::printf("KS(ipd samples, model) = %.4f\n", ks_statistic(ipd, ipd_model_cdf(params)));
}
