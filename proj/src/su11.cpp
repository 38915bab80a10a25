#include "dmcs/su11.hpp"

#include <cmath>
#include <numeric>

namespace dmcs {

double Design::total_length() const {
  double sum = 0.0;
  for (const auto& s : segments) sum += s.length;
  return sum;
}

void ensure_valid(const Segment& segment) {
  if (!std::isfinite(segment.omega) || segment.omega < 0.0)
    throw invalid_input("segment omega must be finite and >= 0");
  if (!std::isfinite(segment.delta_k))
    throw invalid_input("segment delta_k must be finite");
  if (!std::isfinite(segment.length) || segment.length <= 0.0)
    throw invalid_input("segment length must be finite and > 0");
}

void ensure_valid(const Design& design) {
  if (design.segments.empty())
    throw invalid_input("design has no segments");
  if (!std::isfinite(design.work_temperature_c))
    throw invalid_input("work temperature must be finite");
  for (const auto& s : design.segments) ensure_valid(s);
}

Design make_reference_pp(double length, double omega,
                         double work_temperature_c) {
  Design d;
  d.name = "pp_reference";
  d.work_temperature_c = work_temperature_c;
  d.segments.push_back(Segment{omega, 0.0, length});
  ensure_valid(d);
  return d;
}

double Su11Matrix::pseudo_unitarity_defect() const {
  return std::abs(std::norm(alpha) - std::norm(beta) - 1.0);
}

Su11Matrix identity_matrix() { return Su11Matrix{}; }

Su11Matrix compose(const Su11Matrix& after, const Su11Matrix& before) {
  return Su11Matrix{
      after.alpha * before.alpha + after.beta * std::conj(before.beta),
      after.alpha * before.beta + after.beta * std::conj(before.alpha)};
}

Su11Matrix compose(const std::vector<Su11Matrix>& chain) {
  Su11Matrix acc = identity_matrix();
  for (const auto& m : chain) acc = compose(m, acc);
  return acc;
}

namespace detail {

CsPair cs_pair(double q, double l) {
  const double x = q * l * l;
  if (x > 1e-12) {
    const double g = std::sqrt(q);
    return CsPair{std::cosh(g * l), std::sinh(g * l) / g};
  }
  if (x < -1e-12) {
    const double g = std::sqrt(-q);
    return CsPair{std::cos(g * l), std::sin(g * l) / g};
  }
  // degenerate point: C = 1 + x/2 + x^2/24, S = l (1 + x/6 + x^2/120)
  return CsPair{1.0 + 0.5 * x + x * x / 24.0,
                l * (1.0 + x / 6.0 + x * x / 120.0)};
}

void cs_derivatives(double q, double l, int order, std::array<double, 5>& c,
                    std::array<double, 5>& s) {
  if (order < 0 || order > 4)
    throw invalid_input("cs_derivatives supports orders 0..4");
  const double x = q * l * l;
  if (std::abs(x) > 0.01) {
    const CsPair cs = cs_pair(q, l);
    c[0] = cs.c;
    s[0] = cs.s;
    for (int n = 1; n <= order; ++n) {
      c[n] = 0.5 * l * s[n - 1];
      s[n] = (l * c[n - 1] - (2.0 * n - 1.0) * s[n - 1]) / (2.0 * q);
    }
    return;
  }
  // C = sum_k q^k l^{2k} / (2k)!, S = sum_k q^k l^{2k+1} / (2k+1)!;
  // term-wise differentiation stays accurate through q = 0
  for (int n = 0; n <= order; ++n) {
    double cn = 0.0, sn = 0.0;
    // falling factorial k! / (k-n)! times q^{k-n} l^{2k} / (2k)!
    double qpow = 1.0;
    for (int k = n; k < n + 12; ++k) {
      double fall = 1.0;
      for (int j = 0; j < n; ++j) fall *= static_cast<double>(k - j);
      double l2k = std::pow(l, 2 * k);
      double fact2k = 1.0;
      for (int j = 2; j <= 2 * k; ++j) fact2k *= static_cast<double>(j);
      cn += fall * qpow * l2k / fact2k;
      sn += fall * qpow * l2k * l / (fact2k * (2.0 * k + 1.0));
      qpow *= q;
    }
    c[n] = cn;
    s[n] = sn;
  }
}

Su11Matrix bare_segment(double omega, double half_detuning, double length) {
  const double q = omega * omega - half_detuning * half_detuning;
  const CsPair cs = cs_pair(q, length);
  return Su11Matrix{{cs.c, half_detuning * cs.s}, {0.0, -omega * cs.s}};
}

}  // namespace detail

Su11Matrix segment_matrix(const Segment& segment, double epsilon) {
  ensure_valid(segment);
  const double dk = segment.delta_k + epsilon;
  const Su11Matrix bare =
      detail::bare_segment(segment.omega, 0.5 * dk, segment.length);
  const std::complex<double> phase =
      std::exp(std::complex<double>(0.0, -0.5 * dk * segment.length));
  return Su11Matrix{phase * bare.alpha, phase * bare.beta};
}

Su11Matrix design_matrix(const Design& design, double epsilon) {
  ensure_valid(design);
  Su11Matrix acc = identity_matrix();
  double phi = 0.0;
  for (const auto& seg : design.segments) {
    const double dk = seg.delta_k + epsilon;
    acc = compose(detail::bare_segment(seg.omega, 0.5 * dk, seg.length), acc);
    phi += dk * seg.length;
  }
  const std::complex<double> phase =
      std::exp(std::complex<double>(0.0, -0.5 * phi));
  return Su11Matrix{phase * acc.alpha, phase * acc.beta};
}

double HyperboloidPoint::invariant_defect() const {
  return std::abs(u * u + v * v - (w + 1.0) * (w + 1.0) + 1.0);
}

HyperboloidPoint hyperboloid_point(const Su11Matrix& m) {
  const std::complex<double> uv = 2.0 * m.alpha * std::conj(m.beta);
  return HyperboloidPoint{uv.real(), uv.imag(), 2.0 * std::norm(m.beta)};
}

std::vector<TrajectoryPoint> trajectory(const Design& design, double epsilon,
                                        int samples_per_segment) {
  ensure_valid(design);
  if (samples_per_segment < 2)
    throw invalid_input("trajectory needs samples_per_segment >= 2");

  std::vector<TrajectoryPoint> points;
  points.reserve(1 + design.segments.size() * samples_per_segment);
  points.push_back(TrajectoryPoint{0.0, 0.0, HyperboloidPoint{}});

  Su11Matrix prefix = identity_matrix();
  double z0 = 0.0;
  for (const auto& seg : design.segments) {
    const double dk = seg.delta_k + epsilon;
    for (int k = 1; k <= samples_per_segment; ++k) {
      const double zf = seg.length * k / samples_per_segment;
      const Su11Matrix part =
          compose(detail::bare_segment(seg.omega, 0.5 * dk, zf), prefix);
      points.push_back(TrajectoryPoint{z0 + zf, std::norm(part.beta),
                                       hyperboloid_point(part)});
    }
    prefix =
        compose(detail::bare_segment(seg.omega, 0.5 * dk, seg.length), prefix);
    z0 += seg.length;
  }
  return points;
}

}  // namespace dmcs
