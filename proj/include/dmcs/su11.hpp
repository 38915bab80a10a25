#pragma once

#include <array>
#include <complex>
#include <vector>

#include "dmcs/types.hpp"

namespace dmcs {

// Two-mode squeezing propagator in the undepleted-pump regime. The full
// matrix is [[alpha, beta], [conj(beta), conj(alpha)]] with
// |alpha|^2 - |beta|^2 = 1, so the two entries determine everything.
struct Su11Matrix {
  std::complex<double> alpha{1.0, 0.0};
  std::complex<double> beta{0.0, 0.0};

  // | |alpha|^2 - |beta|^2 - 1 |
  double pseudo_unitarity_defect() const;
};

Su11Matrix identity_matrix();

// apply `before` first, then `after`
Su11Matrix compose(const Su11Matrix& after, const Su11Matrix& before);

// chain[0] is applied first
Su11Matrix compose(const std::vector<Su11Matrix>& chain);

// Propagator of one segment with detuning error epsilon added to delta_k.
// Hyperbolic for Omega^2 > (dk'/2)^2, harmonic for the reverse, series at
// the degenerate point.
Su11Matrix segment_matrix(const Segment& segment, double epsilon);

// Propagator of the whole design with the common detuning error epsilon.
// The poling phase is continuous across segment boundaries, so each segment
// contributes its bare rotating-frame matrix and the accumulated mismatch
// phase enters once as a diagonal factor (which leaves |alpha|, |beta| and
// the hyperboloid coordinates untouched).
Su11Matrix design_matrix(const Design& design, double epsilon);

// State as a point on the two-sheet hyperboloid u^2 + v^2 - (w+1)^2 = -1,
// with w = 2|beta|^2 and u + iv = 2 alpha conj(beta).
struct HyperboloidPoint {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;

  // | u^2 + v^2 - (w+1)^2 + 1 |
  double invariant_defect() const;
};

HyperboloidPoint hyperboloid_point(const Su11Matrix& m);

struct TrajectoryPoint {
  double z = 0.0;   // position from crystal entry, m
  double mu = 0.0;  // pair mean |beta|^2
  HyperboloidPoint point;
};

// Samples the cumulative propagator along the crystal: the entry point plus
// samples_per_segment points per segment (samples_per_segment >= 2), for
// 1 + N * samples_per_segment rows in total.
std::vector<TrajectoryPoint> trajectory(const Design& design, double epsilon,
                                        int samples_per_segment);

namespace detail {

// C(q,l) = cosh(sqrt(q) l) or cos(sqrt(-q) l); S is the matching
// sinh(sqrt(q) l)/sqrt(q) or sin(sqrt(-q) l)/sqrt(-q). Series expansion for
// |q| l^2 < 1e-12 keeps both branches continuous through q = 0.
struct CsPair {
  double c = 1.0;
  double s = 0.0;
};
CsPair cs_pair(double q, double l);

// derivatives d^n C / dq^n and d^n S / dq^n for n = 0..order (order <= 4)
void cs_derivatives(double q, double l, int order, std::array<double, 5>& c,
                    std::array<double, 5>& s);

// segment matrix without the e^{-i dk' l / 2} prefactor
Su11Matrix bare_segment(double omega, double half_detuning, double length);

}  // namespace detail

}  // namespace dmcs
