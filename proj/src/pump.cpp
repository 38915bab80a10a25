#include "dmcs/pump.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dmcs {

void ensure_valid(const PumpPhysics& physics) {
  auto positive = [](double value, const char* what) {
    if (!std::isfinite(value) || value <= 0.0)
      throw invalid_input(std::string(what) + " must be finite and > 0");
  };
  positive(physics.n_s, "signal index");
  positive(physics.n_i, "idler index");
  positive(physics.n_p, "pump index");
  positive(physics.omega_s, "signal frequency");
  positive(physics.omega_i, "idler frequency");
  positive(physics.omega_p, "pump frequency");
  positive(physics.hbar, "hbar");
  positive(physics.c, "speed of light");
  if (!std::isfinite(physics.chi2))
    throw invalid_input("chi2 must be finite");
  if (!std::isfinite(physics.pump_amplitude))
    throw invalid_input("pump amplitude must be finite");
  const double sum = physics.omega_s + physics.omega_i;
  if (std::abs(sum - physics.omega_p) > 1e-9 * physics.omega_p)
    throw invalid_input("frequencies must satisfy omega_s + omega_i = omega_p");
}

double compute_kappa(const PumpPhysics& physics) {
  ensure_valid(physics);
  const double ratio = physics.omega_s * physics.omega_i * physics.omega_p /
                       (physics.n_s * physics.n_i * physics.n_p);
  return -(2.0 * physics.chi2 /
           (std::numbers::pi * physics.hbar * physics.c)) *
         std::sqrt(ratio);
}

double pump_coupling_omega(const PumpPhysics& physics) {
  return std::abs(physics.pump_amplitude * compute_kappa(physics));
}

}  // namespace dmcs
