#pragma once

#include <functional>
#include <vector>

#include "dmcs/sensitivity.hpp"
#include "dmcs/su11.hpp"

namespace dmcs {

// d^m |beta(eps)|^2 / d eps^m at eps = 0 for m = 1..order (order <= 4),
// from per-segment Taylor expansions multiplied through the composite.
// Every value is cross-checked against a Richardson-extrapolated central
// difference; disagreement beyond tolerance raises numerical_error.
std::vector<double> beta2_derivatives(const Design& design, int order);

// Mean squared relative ripple of mu over the temperature window
// [T_w - half_width, T_w + half_width] around the work temperature,
// normalized at the window center; composite Simpson rule, n_points odd
// and >= 129.
double flatness_metric(const Design& design,
                       const SensitivityCoefficients& coeffs,
                       double window_half_width_c, int n_points = 257);

struct Width90 {
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
};

// Full 90%-of-peak width on the given axis: uniform scan of the window
// around the work point, linear interpolation at the crossings, the
// contiguous region around the peak. Raises numerical_error when a crossing
// is not bracketed inside the scan.
Width90 width_90(const Design& design, const SensitivityCoefficients& coeffs,
                 DeviationAxis axis, double scan_half_range, int points);

// mu(0) of the design over mu(0) of a single phase-matched segment with the
// same total length and the coupling of the design's first segment
double efficiency_ratio(const Design& design);

struct SweepPoint {
  double deviation = 0.0;
  double mu = 0.0;
};

// mu over a uniform deviation grid [-half_range, +half_range] on one axis;
// half_range = 0 collapses to the single work point
std::vector<SweepPoint> sweep(const Design& design,
                              const SensitivityCoefficients& coeffs,
                              DeviationAxis axis, double half_range,
                              int points);

// lengths by r, every delta_k and Omega by 1/r; mu(scaled, eps/r) equals
// mu(original, eps) identically
Design scale_design(const Design& design, double r);

namespace detail {

// Simpson quadrature of the squared relative ripple of f over
// [-half_width, +half_width], normalized at f(0); shared by flatness_metric
// and its unit tests
double flatness_of(const std::function<double(double)>& f, double half_width,
                   int n_points);

// Taylor coefficients of |beta(eps)|^2 around eps = 0 through order 4
std::array<double, 5> mu_taylor(const Design& design);

double mu_of_epsilon(const Design& design, double epsilon);

}  // namespace detail

}  // namespace dmcs
