#include "dmcs/designer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <optional>
#include <thread>

namespace dmcs {

bool RobustnessReport::passed() const {
  return efficiency_ok && flatness_ok && length_ok &&
         fabrication_ok.value_or(true);
}

namespace {

// quarter period of the harmonic oscillation at the given half detuning,
// empty when the segment would sit inside the hyperbolic band
std::optional<double> quarter_period(double delta_k, double omega) {
  const double g2 = 0.25 * delta_k * delta_k - omega * omega;
  if (g2 <= 0.0) return std::nullopt;
  return std::numbers::pi / (2.0 * std::sqrt(g2));
}

bool try_family(const std::vector<double>& half_detunings, double omega,
                Design& out) {
  const std::size_t k = half_detunings.size();
  out.segments.clear();
  out.segments.reserve(2 * k);
  for (std::size_t j = 0; j < k; ++j) {
    const double dk = half_detunings[j];
    if (!std::isfinite(dk)) return false;
    const auto l = quarter_period(dk, omega);
    if (!l) return false;
    out.segments.push_back(Segment{omega, dk, *l});
  }
  for (std::size_t j = k; j-- > 0;) {
    const Segment& mirror = out.segments[j];
    out.segments.push_back(Segment{omega, -mirror.delta_k, mirror.length});
  }
  return true;
}

}  // namespace

Design build_family(const std::vector<double>& half_detunings, double omega) {
  if (half_detunings.empty())
    throw invalid_input("family needs at least one detuning");
  if (!std::isfinite(omega) || omega <= 0.0)
    throw invalid_input("omega must be finite and > 0");
  Design d;
  d.name = "composite";
  if (!try_family(half_detunings, omega, d))
    throw invalid_input(
        "every |delta_k| must exceed 2 omega (harmonic regime)");
  return d;
}

std::vector<double> residuals(const Design& design, int order) {
  if (order < 1 || order > 4)
    throw invalid_input("residual order must be 1..4");
  const std::array<double, 5> c = detail::mu_taylor(design);
  const double mu0 = c[0];
  if (!(mu0 > 0.0) || !std::isfinite(mu0))
    throw numerical_error("pair mean vanishes at the work point");
  const double lt = design.total_length();
  std::vector<double> r(static_cast<std::size_t>(order));
  double factorial = 1.0;
  double lpow = 1.0;
  for (int m = 1; m <= order; ++m) {
    factorial *= m;
    lpow *= lt;
    r[static_cast<std::size_t>(m - 1)] =
        factorial * c[static_cast<std::size_t>(m)] / (mu0 * lpow);
  }
  return r;
}

namespace {

constexpr double kPenalty = 1e3;

// derivative residuals plus the relative length pin, with a flat penalty
// wall outside the harmonic-family domain
std::vector<double> pinned_residuals(const std::vector<double>& x,
                                     double omega, double target_length,
                                     int order) {
  std::vector<double> r(static_cast<std::size_t>(order) + 1, kPenalty);
  Design d;
  if (!try_family(x, omega, d)) return r;
  try {
    const std::vector<double> dr = residuals(d, order);
    std::copy(dr.begin(), dr.end(), r.begin());
    r.back() = (d.total_length() - target_length) / target_length;
  } catch (const numerical_error&) {
    std::fill(r.begin(), r.end(), kPenalty);
  }
  return r;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// dense n x n solve, partial pivoting; false on a numerically singular pivot
bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& out) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
    if (std::abs(a[piv][col]) < 1e-300) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = a[row][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[row][j] -= f * a[col][j];
      b[row] -= f * b[col];
    }
  }
  out.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * out[j];
    out[i] = s / a[i][i];
  }
  return true;
}

struct FitResult {
  std::vector<double> x;
  std::vector<double> r;
  bool converged = false;
};

FitResult damped_least_squares(std::vector<double> x, double omega,
                               double target_length, int order,
                               int max_iterations) {
  const std::size_t nx = x.size();
  auto resf = [&](const std::vector<double>& xx) {
    return pinned_residuals(xx, omega, target_length, order);
  };
  std::vector<double> r = resf(x);
  const std::size_t nr = r.size();
  double cost = dot(r, r);
  double lambda = 1e-3;

  auto derivs_small = [&](const std::vector<double>& rr, double tol_d,
                          double tol_len) {
    for (std::size_t m = 0; m + 1 < rr.size(); ++m)
      if (std::abs(rr[m]) >= tol_d) return false;
    return std::abs(rr.back()) < tol_len;
  };

  for (int it = 0; it < max_iterations; ++it) {
    std::vector<std::vector<double>> jac(nr, std::vector<double>(nx));
    for (std::size_t j = 0; j < nx; ++j) {
      const double h = 1e-6 * std::abs(x[j]) + 1e-3;
      std::vector<double> xp = x;
      xp[j] += h;
      const std::vector<double> rp = resf(xp);
      for (std::size_t i = 0; i < nr; ++i) jac[i][j] = (rp[i] - r[i]) / h;
    }
    std::vector<double> g(nx, 0.0);
    std::vector<std::vector<double>> h_mat(nx, std::vector<double>(nx, 0.0));
    for (std::size_t i = 0; i < nr; ++i) {
      for (std::size_t j = 0; j < nx; ++j) {
        g[j] += jac[i][j] * r[i];
        for (std::size_t l = 0; l <= j; ++l)
          h_mat[j][l] += jac[i][j] * jac[i][l];
      }
    }
    for (std::size_t j = 0; j < nx; ++j)
      for (std::size_t l = j + 1; l < nx; ++l) h_mat[j][l] = h_mat[l][j];

    bool accepted = false;
    for (int tries = 0; tries < 12; ++tries) {
      std::vector<std::vector<double>> a = h_mat;
      for (std::size_t j = 0; j < nx; ++j)
        a[j][j] += lambda * std::max(h_mat[j][j], 1e-12);
      std::vector<double> neg_g(nx);
      for (std::size_t j = 0; j < nx; ++j) neg_g[j] = -g[j];
      std::vector<double> dx;
      if (!solve_linear(a, neg_g, dx)) {
        lambda *= 10.0;
        continue;
      }
      std::vector<double> xn = x;
      for (std::size_t j = 0; j < nx; ++j) xn[j] += dx[j];
      const std::vector<double> rn = resf(xn);
      const double cn = dot(rn, rn);
      if (cn < cost) {
        x = std::move(xn);
        r = rn;
        cost = cn;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 5.0;
    }
    if (!accepted) break;
    if (derivs_small(r, 1e-11, 1e-9)) return FitResult{x, r, true};
  }
  const bool ok = derivs_small(r, 1e-10, 1e-8);
  return FitResult{x, r, ok};
}

double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

std::vector<double> canonical_detunings(std::vector<double> x) {
  if (!x.empty() && x.front() < 0.0)
    for (double& v : x) v = -v;
  return x;
}

bool same_detunings(const std::vector<double>& a,
                    const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-6 * (1.0 + std::abs(a[i])))
      return false;
  return true;
}

}  // namespace

RobustnessReport validate(const Design& design,
                          const DesignConstraints& constraints,
                          const SensitivityCoefficients& coeffs) {
  RobustnessReport rep;
  rep.total_length = design.total_length();
  rep.length_ok = rep.total_length > 0.0 &&
                  rep.total_length <= constraints.max_total_length;
  try {
    rep.efficiency = efficiency_ratio(design);
    rep.efficiency_ok = rep.efficiency >= constraints.efficiency_floor;
  } catch (const std::exception&) {
    rep.efficiency_ok = false;
  }
  try {
    rep.flatness = flatness_metric(design, coeffs,
                                   constraints.window_half_width_c,
                                   constraints.flatness_points);
    rep.flatness_ok = rep.flatness <= constraints.flatness_threshold;
  } catch (const std::exception&) {
    rep.flatness_ok = false;
  }
  try {
    const auto pts =
        sweep(design, coeffs, DeviationAxis::temperature,
              constraints.window_half_width_c, constraints.flatness_points);
    double lo = pts.front().mu, hi = pts.front().mu;
    for (const auto& p : pts) {
      lo = std::min(lo, p.mu);
      hi = std::max(hi, p.mu);
    }
    rep.window_spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
  } catch (const std::exception&) {
    rep.window_spread = 1.0;
  }
  if (constraints.min_domain_width && constraints.material_mismatch) {
    double min_half = 0.0;
    bool periods_ok = true;
    for (const auto& seg : design.segments) {
      const double denom = *constraints.material_mismatch - seg.delta_k;
      if (denom <= 0.0) {
        periods_ok = false;
        break;
      }
      const double half = std::numbers::pi / denom;
      min_half = (min_half == 0.0) ? half : std::min(min_half, half);
    }
    rep.min_half_period = periods_ok ? min_half : 0.0;
    try {
      poling_pattern(design, *constraints.material_mismatch,
                     *constraints.min_domain_width);
      rep.fabrication_ok = true;
    } catch (const std::exception&) {
      rep.fabrication_ok = false;
    }
  }
  return rep;
}

std::vector<Candidate> solve(const SolveOptions& options,
                             const DesignConstraints& constraints,
                             const SensitivityCoefficients& coeffs,
                             SolveDiagnostics* diagnostics) {
  SolveDiagnostics local;
  SolveDiagnostics& diag = diagnostics ? *diagnostics : local;
  diag = SolveDiagnostics{};
  diag.starts = options.starts;
  if (options.segments < 2 || options.segments % 2 != 0 ||
      options.segments > 16)
    throw invalid_input("segment count must be even, 2..16");
  if (!std::isfinite(options.omega) || options.omega <= 0.0)
    throw invalid_input("omega must be finite and > 0");
  if (!std::isfinite(options.target_length) || options.target_length <= 0.0)
    throw invalid_input("target length must be finite and > 0");
  if (options.order < 1 || options.order > 4)
    throw invalid_input("derivative order must be 1..4");
  if (options.starts < 1) throw invalid_input("need at least one start");
  if (options.max_iterations < 1)
    throw invalid_input("need at least one iteration");
  if (options.max_candidates < 1)
    throw invalid_input("need at least one candidate slot");

  const std::size_t k = static_cast<std::size_t>(options.segments) / 2;
  static constexpr std::array<std::uint64_t, 8> kPrimes{2, 3, 5, 7,
                                                        11, 13, 17, 19};

  const double pi_over_t = std::numbers::pi / options.target_length;
  double lo = options.detuning_min > 0.0
                  ? options.detuning_min
                  : std::max(2.5 * options.omega, 0.75 * pi_over_t);
  double hi = options.detuning_max > 0.0 ? options.detuning_max
                                         : 100.0 * pi_over_t;
  if (!(hi > lo))
    throw invalid_input("detuning search box is empty");
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);

  const std::uint64_t offset = 1 + (options.seed % 100003);

  std::vector<FitResult> fits(static_cast<std::size_t>(options.starts));
  auto run_start = [&](int s) {
    std::vector<double> x0(k);
    for (std::size_t i = 0; i < k; ++i) {
      const double u = halton(offset + static_cast<std::uint64_t>(s),
                              kPrimes[i]);
      const double mag = std::exp(log_lo + u * (log_hi - log_lo));
      const double sign = ((static_cast<unsigned>(s) >> i) & 1u) ? -1.0 : 1.0;
      x0[i] = sign * mag;
    }
    fits[static_cast<std::size_t>(s)] =
        damped_least_squares(std::move(x0), options.omega,
                             options.target_length, options.order,
                             options.max_iterations);
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(
      {hw, 16u, static_cast<unsigned>(options.starts)});
  if (workers <= 1) {
    for (int s = 0; s < options.starts; ++s) run_start(s);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int s = next.fetch_add(1); s < options.starts;
             s = next.fetch_add(1))
          run_start(s);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<Candidate> out;
  std::vector<std::vector<double>> seen;
  for (int s = 0; s < options.starts; ++s) {
    const FitResult& fit = fits[static_cast<std::size_t>(s)];
    if (!fit.converged) continue;
    ++diag.converged;
    const std::vector<double> key = canonical_detunings(fit.x);
    bool duplicate = false;
    for (const auto& other : seen)
      if (same_detunings(key, other)) {
        duplicate = true;
        break;
      }
    if (duplicate) continue;
    seen.push_back(key);
    ++diag.unique;

    Design d;
    if (!try_family(fit.x, options.omega, d)) continue;
    d.name = "composite";
    try {
      beta2_derivatives(d, options.order);  // independent derivative check
    } catch (const numerical_error&) {
      ++diag.rejected_derivative_check;
      continue;
    }
    RobustnessReport rep = validate(d, constraints, coeffs);
    if (!rep.passed()) {
      if (!rep.efficiency_ok) ++diag.rejected_efficiency;
      if (!rep.flatness_ok) ++diag.rejected_flatness;
      if (!rep.length_ok) ++diag.rejected_length;
      if (rep.fabrication_ok && !*rep.fabrication_ok)
        ++diag.rejected_fabrication;
      continue;
    }
    out.push_back(Candidate{fit.x, std::move(d), rep,
                            std::sqrt(dot(fit.r, fit.r)), s});
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.report.flatness < b.report.flatness;
                   });
  if (out.size() > static_cast<std::size_t>(options.max_candidates))
    out.resize(static_cast<std::size_t>(options.max_candidates));
  return out;
}

PolingPattern poling_pattern(const Design& design, double material_mismatch,
                             double min_domain_width) {
  ensure_valid(design);
  if (!std::isfinite(material_mismatch))
    throw invalid_input("material mismatch must be finite");
  if (!std::isfinite(min_domain_width) || min_domain_width < 0.0)
    throw invalid_input("minimum domain width must be finite and >= 0");

  PolingPattern pattern;
  pattern.total_length = design.total_length();
  double z = 0.0;
  int sign = +1;
  for (const auto& seg : design.segments) {
    const double denom = material_mismatch - seg.delta_k;
    if (denom <= 0.0)
      throw invalid_input("segment needs a positive poling period");
    const double half = std::numbers::pi / denom;
    if (half < min_domain_width)
      throw invalid_input("domain width falls below the fabrication limit");
    const int n = static_cast<int>(std::floor(seg.length / half));
    if (n < 1)
      throw invalid_input("segment is shorter than one poling domain");
    // whole half periods; the cut residual is absorbed by the last domain
    for (int i = 0; i < n; ++i) {
      pattern.starts.push_back(z + half * i);
      pattern.signs.push_back(sign);
      sign = -sign;
    }
    z += seg.length;
  }
  return pattern;
}

}  // namespace dmcs
