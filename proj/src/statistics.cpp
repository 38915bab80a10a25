#include "dmcs/statistics.hpp"

#include <cmath>

namespace dmcs {

double pair_mean(const Su11Matrix& m) { return std::norm(m.beta); }

double multi_pair_probability(double mu) {
  if (!std::isfinite(mu) || mu < 0.0)
    throw invalid_input("pair mean must be finite and >= 0");
  const double p = mu / (1.0 + mu);
  return p * p;
}

PhotonNumberDistribution photon_statistics(double mu, int n_max) {
  if (!std::isfinite(mu) || mu < 0.0)
    throw invalid_input("pair mean must be finite and >= 0");
  if (n_max < 0) throw invalid_input("n_max must be >= 0");

  PhotonNumberDistribution d;
  d.mu = mu;
  d.p = mu / (1.0 + mu);
  d.mean = mu;
  d.variance = mu * (mu + 1.0);
  d.multi_pair_probability = d.p * d.p;
  d.probabilities.resize(static_cast<std::size_t>(n_max) + 1);
  double pn = 1.0 - d.p;  // thermal: P(n) = p^n (1 - p)
  for (int n = 0; n <= n_max; ++n) {
    d.probabilities[static_cast<std::size_t>(n)] = pn;
    pn *= d.p;
  }
  return d;
}

}  // namespace dmcs
