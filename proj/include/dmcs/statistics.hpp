#pragma once

#include <vector>

#include "dmcs/su11.hpp"

namespace dmcs {

// mean photon-pair number mu = |beta|^2
double pair_mean(const Su11Matrix& m);

// Thermal number distribution of one squeezed mode:
// P(n) = p^n (1 - p) with p = mu / (1 + mu).
struct PhotonNumberDistribution {
  double mu = 0.0;
  double p = 0.0;
  double mean = 0.0;
  double variance = 0.0;              // mu (mu + 1)
  double multi_pair_probability = 0;  // P(n >= 2) = p^2
  std::vector<double> probabilities;  // P(0) .. P(n_max)
};

PhotonNumberDistribution photon_statistics(double mu, int n_max);

double multi_pair_probability(double mu);

}  // namespace dmcs
