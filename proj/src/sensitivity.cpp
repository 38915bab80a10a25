#include "dmcs/sensitivity.hpp"

#include "dmcs/su11.hpp"

#include <cmath>
#include <string>

namespace dmcs {

const char* axis_name(DeviationAxis axis) {
  switch (axis) {
    case DeviationAxis::temperature: return "temperature";
    case DeviationAxis::wavelength: return "wavelength";
    case DeviationAxis::angle: return "angle";
    case DeviationAxis::epsilon: return "epsilon";
  }
  throw invalid_input("unknown deviation axis");
}

double SensitivityCoefficients::coefficient(DeviationAxis axis) const {
  switch (axis) {
    case DeviationAxis::temperature: return dk_dT;
    case DeviationAxis::wavelength: return dk_dlambda;
    case DeviationAxis::angle: return dk_dtheta;
    case DeviationAxis::epsilon: return 1.0;
  }
  throw invalid_input("unknown deviation axis");
}

namespace {

// pair mean of a uniform phase-matched crystal evaluated off nominal
double pp_mu(double length, double omega, double epsilon) {
  const double h = 0.5 * epsilon;
  const double q = omega * omega - h * h;
  const detail::CsPair cs = detail::cs_pair(q, length);
  const double os = omega * cs.s;
  return os * os;
}

}  // namespace

double width90_epsilon(double crystal_length, double omega) {
  if (!std::isfinite(crystal_length) || crystal_length <= 0.0)
    throw invalid_input("crystal length must be finite and > 0");
  if (!std::isfinite(omega) || omega <= 0.0)
    throw invalid_input("omega must be finite and > 0");

  const double mu0 = pp_mu(crystal_length, omega, 0.0);
  if (mu0 <= 0.0) throw numerical_error("reference pair mean vanished");
  auto excess = [&](double eps) {
    return pp_mu(crystal_length, omega, eps) / mu0 - 0.9;
  };

  double lo = 0.0;
  double hi = 1.0 / crystal_length;
  int guard = 0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 1.5;
    if (++guard > 200)
      throw numerical_error("failed to bracket the 90% crossing");
  }
  for (int i = 0; i < 200 && (hi - lo) > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double calibrate(const CalibrationDatum& datum) {
  if (datum.axis == DeviationAxis::epsilon)
    throw invalid_input("epsilon axis needs no calibration");
  if (!std::isfinite(datum.width_value) || datum.width_value <= 0.0)
    throw invalid_input("measured half width must be finite and > 0");
  return width90_epsilon(datum.crystal_length, datum.omega) /
         datum.width_value;
}

double epsilon_from(const SensitivityCoefficients& coeffs, DeviationAxis axis,
                    double deviation) {
  if (!std::isfinite(deviation))
    throw invalid_input("deviation must be finite");
  return coeffs.coefficient(axis) * deviation;
}

SensitivityCoefficients default_sensitivity() {
  const CalibrationDatum temperature{DeviationAxis::temperature,
                                     kReferenceTemperatureHalfWidthC,
                                     kReferenceCrystalLength, kReferenceOmega};
  const CalibrationDatum wavelength{DeviationAxis::wavelength,
                                    kReferenceWavelengthHalfWidthNm,
                                    kReferenceCrystalLength, kReferenceOmega};
  const CalibrationDatum angle{DeviationAxis::angle,
                               kReferenceAngleHalfWidthDeg,
                               kReferenceCrystalLength, kReferenceOmega};
  return SensitivityCoefficients{calibrate(temperature), calibrate(wavelength),
                                 calibrate(angle)};
}

}  // namespace dmcs
