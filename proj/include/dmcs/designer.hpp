#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dmcs/robustness.hpp"
#include "dmcs/sensitivity.hpp"
#include "dmcs/types.hpp"

namespace dmcs {

// Even-N family with delta_k_{N+1-j} = -delta_k_j, uniform Omega, and every
// segment at its harmonic quarter period l_j = pi / (2 sqrt((dk_j/2)^2 -
// Omega^2)). Odd derivatives of |beta(eps)|^2 vanish identically on this
// family, so the designer only has to zero the even ones.
Design build_family(const std::vector<double>& half_detunings, double omega);

// normalized derivative residuals r_m = (d^m mu / d eps^m) / (mu(0) L^m),
// m = 1..order
std::vector<double> residuals(const Design& design, int order);

struct DesignConstraints {
  double efficiency_floor = 0.1;
  double flatness_threshold = 0.01;
  double window_half_width_c = 2.4;
  double max_total_length = 0.025;               // m
  std::optional<double> min_domain_width;        // m
  std::optional<double> material_mismatch;       // rad/m, for fabrication checks
  int flatness_points = 257;
};

struct RobustnessReport {
  double total_length = 0.0;
  double efficiency = 0.0;
  double flatness = 0.0;
  double window_spread = 0.0;   // (max - min)/max of mu over the window
  double min_half_period = 0.0; // m, only when fabrication was evaluated
  bool efficiency_ok = false;
  bool flatness_ok = false;
  bool length_ok = false;
  std::optional<bool> fabrication_ok;  // empty when not evaluated

  bool passed() const;
};

// Reports, never throws: every check is evaluated and its verdict recorded.
// Fabrication is evaluated only when both min_domain_width and
// material_mismatch are present.
RobustnessReport validate(const Design& design,
                          const DesignConstraints& constraints,
                          const SensitivityCoefficients& coeffs);

struct SolveOptions {
  int segments = 6;
  double omega = kReferenceOmega;
  double target_length = 0.02;  // m
  int order = 2;
  int starts = 256;
  std::uint64_t seed = 1;
  int max_iterations = 200;
  int max_candidates = 8;
  // search box for |delta_k|; zeros mean derive from target_length
  double detuning_min = 0.0;
  double detuning_max = 0.0;
};

struct Candidate {
  std::vector<double> half_detunings;
  Design design;
  RobustnessReport report;
  double residual_norm = 0.0;
  int start_index = -1;
};

// Attrition bookkeeping for a solve run, for reporting why a search came
// back empty.
struct SolveDiagnostics {
  int starts = 0;
  int converged = 0;
  int unique = 0;
  int rejected_derivative_check = 0;
  int rejected_efficiency = 0;
  int rejected_flatness = 0;
  int rejected_length = 0;
  int rejected_fabrication = 0;
};

// Multi-start damped least squares over the half detunings: low-discrepancy
// seeded starts, Levenberg-Marquardt with a numerical Jacobian on the
// normalized derivative residuals plus a total-length pin. Converged,
// deduplicated candidates that pass validate() are returned sorted by
// flatness. Deterministic for a fixed seed; independent starts run
// concurrently.
std::vector<Candidate> solve(const SolveOptions& options,
                             const DesignConstraints& constraints,
                             const SensitivityCoefficients& coeffs,
                             SolveDiagnostics* diagnostics = nullptr);

struct PolingPattern {
  std::vector<double> starts;  // domain start positions, starts[0] = 0
  std::vector<int> signs;      // alternating +1/-1 per domain
  double total_length = 0.0;
};

// Per-segment period Lambda_j = 2 pi / (material_mismatch - delta_k_j),
// domains of half a period, sign alternation continuing across segment
// boundaries; each segment is truncated to whole half-periods and the
// residual is appended to its last domain. Raises invalid_input when a
// period is non-positive or a domain falls below min_domain_width.
PolingPattern poling_pattern(const Design& design, double material_mismatch,
                             double min_domain_width);

}  // namespace dmcs
