#pragma once

#include "dmcs/types.hpp"

namespace dmcs {

// Inputs for the nonlinear coupling strength. Frequencies in rad/s, chi2 in
// m/V; pump_amplitude uses the sqrt(n/omega)-scaled field convention, and
// energy conservation omega_p = omega_s + omega_i is enforced to 1e-9
// relative.
struct PumpPhysics {
  double chi2 = 0.0;
  double n_s = 1.0;
  double n_i = 1.0;
  double n_p = 1.0;
  double omega_s = 0.0;
  double omega_i = 0.0;
  double omega_p = 0.0;
  double pump_amplitude = 0.0;
  double hbar = 1.054571817e-34;  // J s
  double c = 299792458.0;         // m/s
};

void ensure_valid(const PumpPhysics& pump);

// kappa = -(2 chi2 / (pi hbar c)) sqrt(omega_s omega_i omega_p / (n_s n_i n_p))
double compute_kappa(const PumpPhysics& pump);

// coupling strength Omega = |pump_amplitude * kappa|
double pump_coupling_omega(const PumpPhysics& pump);

}  // namespace dmcs
