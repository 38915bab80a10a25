#pragma once

#include "dmcs/types.hpp"

namespace dmcs {

enum class DeviationAxis { temperature, wavelength, angle, epsilon };

const char* axis_name(DeviationAxis axis);

// One measured (or quoted) 90%-of-peak half-width on a physical axis for a
// phase-matched reference crystal: width_value in degC, nm or deg.
struct CalibrationDatum {
  DeviationAxis axis = DeviationAxis::temperature;
  double width_value = 0.0;
  double crystal_length = 0.0;  // m
  double omega = 0.0;           // rad/m
};

// Linear detuning response per axis; epsilon = coefficient * deviation.
struct SensitivityCoefficients {
  double dk_dT = 0.0;       // rad/(m degC)
  double dk_dlambda = 0.0;  // rad/(m nm)
  double dk_dtheta = 0.0;   // rad/(m deg)

  double coefficient(DeviationAxis axis) const;
};

// Detuning half-width at which a single phase-matched segment's pair mean
// drops to 90% of its peak; bracketing plus bisection on the exact
// expression. In the weak-pump limit this is 2 x* / length with
// sin^2(x*)/x*^2 = 0.9.
double width90_epsilon(double crystal_length, double omega);

// coefficient = width90_epsilon / datum width
double calibrate(const CalibrationDatum& datum);

double epsilon_from(const SensitivityCoefficients& coeffs, DeviationAxis axis,
                    double deviation);

// 20 mm phase-matched reference at the weak-pump coupling of the calibration
// setup; exact Omega is non-critical there (see the insensitivity test).
inline constexpr double kReferenceCrystalLength = 0.02;
inline constexpr double kReferenceOmega = 0.68;
inline constexpr double kReferenceTemperatureHalfWidthC = 0.445;
inline constexpr double kReferenceWavelengthHalfWidthNm = 10.64;
inline constexpr double kReferenceAngleHalfWidthDeg = 0.227;
inline constexpr double kReferenceWorkTemperatureC = 37.0;

// coefficients calibrated on the three reference data above
SensitivityCoefficients default_sensitivity();

}  // namespace dmcs
