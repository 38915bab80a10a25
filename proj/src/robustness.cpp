#include "dmcs/robustness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace dmcs {

namespace detail {

namespace {

constexpr int kOrd = 5;  // polynomial coefficients 0..4
using Poly = std::array<std::complex<double>, kOrd>;
using RealPoly = std::array<double, kOrd>;

Poly pmul(const Poly& a, const Poly& b) {
  Poly out{};
  for (int i = 0; i < kOrd; ++i)
    for (int j = 0; j < kOrd - i; ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly pconj(const Poly& a) {
  Poly out;
  for (int i = 0; i < kOrd; ++i) out[i] = std::conj(a[i]);
  return out;
}

// Taylor coefficients in the detuning shift of A and B for one bare segment.
// The shift enters through q(eps) = q0 - h0 eps - eps^2/4 and h = h0 + eps/2.
void segment_taylor(double omega, double dk, double length, Poly& a, Poly& b) {
  const double h0 = 0.5 * dk;
  const double q0 = omega * omega - h0 * h0;
  std::array<double, 5> cq{}, sq{};
  cs_derivatives(q0, length, 4, cq, sq);

  RealPoly dq{0.0, -h0, -0.25, 0.0, 0.0};
  RealPoly cp{}, sp{};
  RealPoly pw{1.0, 0.0, 0.0, 0.0, 0.0};
  double factorial = 1.0;
  for (int n = 0; n < kOrd; ++n) {
    if (n > 0) factorial *= n;
    for (int i = 0; i < kOrd; ++i) {
      cp[i] += cq[static_cast<std::size_t>(n)] / factorial * pw[i];
      sp[i] += sq[static_cast<std::size_t>(n)] / factorial * pw[i];
    }
    RealPoly next{};
    for (int i = 0; i < kOrd; ++i)
      for (int j = 0; j < kOrd - i; ++j) next[i + j] += pw[i] * dq[j];
    pw = next;
  }

  Poly hp{};
  hp[0] = h0;
  hp[1] = 0.5;
  Poly spc{};
  for (int i = 0; i < kOrd; ++i) spc[i] = sp[i];
  const Poly hs = pmul(hp, spc);
  for (int i = 0; i < kOrd; ++i) {
    a[i] = std::complex<double>(cp[i], 0.0) +
           std::complex<double>(0.0, 1.0) * hs[i];
    b[i] = std::complex<double>(0.0, -omega) * spc[i];
  }
}

}  // namespace

std::array<double, 5> mu_taylor(const Design& design) {
  ensure_valid(design);
  Poly wa{}, wb{};
  wa[0] = 1.0;
  for (const auto& seg : design.segments) {
    Poly a, b;
    segment_taylor(seg.omega, seg.delta_k, seg.length, a, b);
    const Poly na_ = pmul(a, wa);
    const Poly nb_ = pmul(b, pconj(wb));
    const Poly nc_ = pmul(a, wb);
    const Poly nd_ = pmul(b, pconj(wa));
    for (int i = 0; i < kOrd; ++i) {
      wa[i] = na_[i] + nb_[i];
      wb[i] = nc_[i] + nd_[i];
    }
  }
  const Poly mu = pmul(wb, pconj(wb));
  std::array<double, 5> out{};
  double scale = 1.0;
  for (int i = 0; i < kOrd; ++i) scale = std::max(scale, std::abs(mu[i]));
  for (int i = 0; i < kOrd; ++i) {
    if (std::abs(mu[i].imag()) > 1e-12 * scale)
      throw numerical_error("pair-mean expansion lost realness");
    out[static_cast<std::size_t>(i)] = mu[i].real();
  }
  return out;
}

double mu_of_epsilon(const Design& design, double epsilon) {
  Su11Matrix acc = identity_matrix();
  for (const auto& seg : design.segments) {
    const double h = 0.5 * (seg.delta_k + epsilon);
    acc = compose(bare_segment(seg.omega, h, seg.length), acc);
  }
  return std::norm(acc.beta);
}

double flatness_of(const std::function<double(double)>& f, double half_width,
                   int n_points) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw invalid_input("window half width must be finite and > 0");
  if (n_points < 129 || n_points % 2 == 0)
    throw invalid_input("quadrature needs an odd point count >= 129");

  const double center = f(0.0);
  if (!(center > 0.0))
    throw numerical_error("window-center pair mean vanished");

  const double h = 2.0 * half_width / (n_points - 1);
  double sum = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double x = -half_width + h * i;
    const double r = f(x) / center - 1.0;
    const double w =
        (i == 0 || i == n_points - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += w * r * r;
  }
  return sum * h / 3.0 / (2.0 * half_width);
}

}  // namespace detail

std::vector<double> beta2_derivatives(const Design& design, int order) {
  ensure_valid(design);
  if (order < 1 || order > 4)
    throw invalid_input("derivative order must be 1..4");

  const std::array<double, 5> c = detail::mu_taylor(design);
  const double mu0 = c[0];
  const double lt = design.total_length();

  auto f = [&](double e) { return detail::mu_of_epsilon(design, e); };
  auto stencil = [&](int m, double hh) {
    switch (m) {
      case 1: return (f(hh) - f(-hh)) / (2.0 * hh);
      case 2: return (f(hh) - 2.0 * f(0.0) + f(-hh)) / (hh * hh);
      case 3:
        return (f(2.0 * hh) - 2.0 * f(hh) + 2.0 * f(-hh) - f(-2.0 * hh)) /
               (2.0 * hh * hh * hh);
      default:
        return (f(2.0 * hh) - 4.0 * f(hh) + 6.0 * f(0.0) - 4.0 * f(-hh) +
                f(-2.0 * hh)) /
               (hh * hh * hh * hh);
    }
  };

  // detuning scale over which the composite response varies appreciably
  const double base = 1.1184895636800566 / lt;
  static constexpr std::array<double, 5> kStepFactor{0.0, 1e-3, 2e-2, 5e-2,
                                                     1e-1};
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(order));
  double factorial = 1.0;
  for (int m = 1; m <= order; ++m) {
    factorial *= m;
    const double analytic = factorial * c[static_cast<std::size_t>(m)];

    const double h = base * kStepFactor[static_cast<std::size_t>(m)];
    const double d1 = stencil(m, h);
    const double d2 = stencil(m, 0.5 * h);
    const double d4 = stencil(m, 0.25 * h);
    const double r1 = (4.0 * d2 - d1) / 3.0;
    const double r2 = (4.0 * d4 - d2) / 3.0;
    const double fd = (16.0 * r2 - r1) / 15.0;
    const double fd_err = std::abs(fd - r2);

    const double tol = std::max({1e-6 * std::abs(analytic),
                                 std::pow(10.0, -(10.0 - m)) * mu0 *
                                     std::pow(lt, m),
                                 8.0 * fd_err});
    if (std::abs(analytic - fd) > tol)
      throw numerical_error(
          "analytic and finite-difference derivatives disagree");
    out.push_back(analytic);
  }
  return out;
}

double flatness_metric(const Design& design,
                       const SensitivityCoefficients& coeffs,
                       double window_half_width_c, int n_points) {
  ensure_valid(design);
  const double k = coeffs.dk_dT;
  if (!std::isfinite(k) || k <= 0.0)
    throw invalid_input("temperature coefficient must be finite and > 0");
  auto f = [&](double dt) { return detail::mu_of_epsilon(design, k * dt); };
  return detail::flatness_of(f, window_half_width_c, n_points);
}

Width90 width_90(const Design& design, const SensitivityCoefficients& coeffs,
                 DeviationAxis axis, double scan_half_range, int points) {
  ensure_valid(design);
  if (!(scan_half_range > 0.0) || !std::isfinite(scan_half_range))
    throw invalid_input("scan half range must be finite and > 0");
  if (points < 9) throw invalid_input("width scan needs at least 9 points");

  const double k = coeffs.coefficient(axis);
  const double h = 2.0 * scan_half_range / (points - 1);
  std::vector<double> xs(static_cast<std::size_t>(points));
  std::vector<double> mus(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    xs[static_cast<std::size_t>(i)] = -scan_half_range + h * i;
    mus[static_cast<std::size_t>(i)] =
        detail::mu_of_epsilon(design, k * xs[static_cast<std::size_t>(i)]);
  }

  const auto peak_it = std::max_element(mus.begin(), mus.end());
  const double level = 0.9 * *peak_it;
  if (!(level > 0.0)) throw numerical_error("scan peak vanished");
  const long ipk = peak_it - mus.begin();

  auto cross = [&](int dir) {
    for (long i = ipk; i + dir >= 0 && i + dir < points; i += dir) {
      const long j = i + dir;
      const std::size_t si = static_cast<std::size_t>(i);
      const std::size_t sj = static_cast<std::size_t>(j);
      if (mus[sj] < level) {
        const double t = (level - mus[si]) / (mus[sj] - mus[si]);
        return xs[si] + t * (xs[sj] - xs[si]);
      }
    }
    throw numerical_error("90% crossing not bracketed inside the scan");
  };
  return Width90{cross(-1), cross(+1)};
}

double efficiency_ratio(const Design& design) {
  ensure_valid(design);
  const double omega = design.segments.front().omega;
  if (!(omega > 0.0))
    throw invalid_input("efficiency reference needs a positive coupling");
  const double mu0 = detail::mu_of_epsilon(design, 0.0);
  const Su11Matrix pp =
      detail::bare_segment(omega, 0.0, design.total_length());
  const double mu_pp = std::norm(pp.beta);
  if (!(mu_pp > 0.0))
    throw numerical_error("phase-matched reference pair mean vanished");
  return mu0 / mu_pp;
}

std::vector<SweepPoint> sweep(const Design& design,
                              const SensitivityCoefficients& coeffs,
                              DeviationAxis axis, double half_range,
                              int points) {
  ensure_valid(design);
  if (!std::isfinite(half_range) || half_range < 0.0)
    throw invalid_input("sweep half range must be finite and >= 0");
  const double k = coeffs.coefficient(axis);

  if (half_range == 0.0 || points == 1)
    return {SweepPoint{0.0, detail::mu_of_epsilon(design, 0.0)}};
  if (points < 2) throw invalid_input("sweep needs at least 2 points");

  std::vector<SweepPoint> out(static_cast<std::size_t>(points));
  const double h = 2.0 * half_range / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double x = -half_range + h * i;
    out[static_cast<std::size_t>(i)] =
        SweepPoint{x, detail::mu_of_epsilon(design, k * x)};
  }
  return out;
}

Design scale_design(const Design& design, double r) {
  ensure_valid(design);
  if (!std::isfinite(r) || r <= 0.0)
    throw invalid_input("scale factor must be finite and > 0");
  Design out = design;
  for (auto& seg : out.segments) {
    seg.length *= r;
    seg.delta_k /= r;
    seg.omega /= r;
  }
  return out;
}

}  // namespace dmcs
