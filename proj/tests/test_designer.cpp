#include "dmcs/designer.hpp"
#include "dmcs/robustness.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

using namespace dmcs;

namespace {

constexpr double kPi = std::numbers::pi;

DesignConstraints permissive() {
  DesignConstraints c;
  c.efficiency_floor = 0.0;
  c.flatness_threshold = 1e9;
  c.max_total_length = 1.0;
  return c;
}

// converged half detunings of the flattest 6-segment candidate at the
// reference coupling (seed 1, 1024 starts); regression anchor for the
// designer pipeline
const std::vector<double> kFlatSix{1615.2393065418723, 417.29350896732956,
                                   -5967.021834283587};

}  // namespace

TEST_CASE("family designs are anti-symmetric with quarter-period lengths") {
  const double omega = 100.0;
  const Design d = build_family({250.0, -300.0, 450.0}, omega);
  REQUIRE(d.segments.size() == 6);
  const std::size_t n = d.segments.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Segment& seg = d.segments[j];
    CHECK(seg.omega == omega);
    CHECK(seg.delta_k == -d.segments[n - 1 - j].delta_k);
    CHECK(seg.length == d.segments[n - 1 - j].length);
    const double expected =
        kPi / (2.0 * std::sqrt(0.25 * seg.delta_k * seg.delta_k -
                               omega * omega));
    CHECK(seg.length == doctest::Approx(expected).epsilon(1e-14));
  }
  CHECK(d.segments[0].delta_k == 250.0);
  CHECK(d.segments[1].delta_k == -300.0);
  CHECK(d.segments[2].delta_k == 450.0);
  CHECK(d.segments[3].delta_k == -450.0);
}

TEST_CASE("family construction rejects non-harmonic detunings") {
  CHECK_THROWS_AS(build_family({199.0}, 100.0), invalid_input);
  CHECK_THROWS_AS(build_family({200.0}, 100.0), invalid_input);  // boundary
  CHECK_THROWS_AS(build_family({-150.0}, 100.0), invalid_input);
  CHECK_THROWS_AS(build_family({}, 100.0), invalid_input);
  CHECK_THROWS_AS(build_family({250.0}, 0.0), invalid_input);
  CHECK_THROWS_AS(build_family({250.0}, -1.0), invalid_input);
}

TEST_CASE("quarter period approaches pi over delta k at weak coupling") {
  const Design d = build_family({1000.0}, 1e-6);
  CHECK(d.segments[0].length == doctest::Approx(kPi / 1000.0).epsilon(1e-12));
}

TEST_CASE("residuals are the normalized derivatives") {
  const Design d = build_family({1200.0, -800.0}, 0.68);
  const auto r = residuals(d, 4);
  REQUIRE(r.size() == 4);
  const auto deriv = beta2_derivatives(d, 4);
  const double mu0 = detail::mu_of_epsilon(d, 0.0);
  const double lt = d.total_length();
  double lp = 1.0;
  for (int m = 1; m <= 4; ++m) {
    lp *= lt;
    const double expected = deriv[static_cast<std::size_t>(m - 1)] / (mu0 * lp);
    CHECK(r[static_cast<std::size_t>(m - 1)] ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  // odd orders vanish by the anti-symmetry of the family
  CHECK(std::abs(r[0]) <= 1e-9);
  CHECK(std::abs(r[2]) <= 1e-9);
}

TEST_CASE("residuals validates its inputs") {
  const Design d = build_family({1200.0}, 0.68);
  CHECK_THROWS_AS(residuals(d, 0), invalid_input);
  CHECK_THROWS_AS(residuals(d, 5), invalid_input);
  Design dark;  // zero coupling produces no pairs at all
  dark.segments.push_back(Segment{0.0, 100.0, 0.01});
  CHECK_THROWS_AS(residuals(dark, 2), numerical_error);
}

TEST_CASE("validate reports every gate separately") {
  const Design pp = make_reference_pp(0.02, 0.68);
  const auto coeffs = default_sensitivity();

  DesignConstraints c;  // defaults: floor 0.1, flatness 0.01, length 0.025
  RobustnessReport rep = validate(pp, c, coeffs);
  CHECK(rep.efficiency == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.efficiency_ok);
  CHECK(rep.length_ok);
  CHECK(rep.total_length == doctest::Approx(0.02).epsilon(1e-15));
  CHECK_FALSE(rep.flatness_ok);  // a bare crystal is anything but flat
  CHECK_FALSE(rep.fabrication_ok.has_value());
  CHECK_FALSE(rep.passed());

  c.flatness_threshold = 1e9;
  rep = validate(pp, c, coeffs);
  CHECK(rep.flatness_ok);
  CHECK(rep.passed());

  c.max_total_length = 0.01;
  rep = validate(pp, c, coeffs);
  CHECK_FALSE(rep.length_ok);
  CHECK_FALSE(rep.passed());
  c.max_total_length = 0.025;

  c.efficiency_floor = 1.5;
  rep = validate(pp, c, coeffs);
  CHECK_FALSE(rep.efficiency_ok);
  CHECK_FALSE(rep.passed());
  c.efficiency_floor = 0.1;

  // fabrication gate only engages when both limits are present
  c.material_mismatch = kPi / 5e-6;
  rep = validate(pp, c, coeffs);
  CHECK_FALSE(rep.fabrication_ok.has_value());
  c.min_domain_width = 1e-6;
  rep = validate(pp, c, coeffs);
  REQUIRE(rep.fabrication_ok.has_value());
  CHECK(*rep.fabrication_ok);
  CHECK(rep.min_half_period == doctest::Approx(5e-6).epsilon(1e-12));
  CHECK(rep.passed());

  c.min_domain_width = 6e-6;  // tighter than the actual half period
  rep = validate(pp, c, coeffs);
  REQUIRE(rep.fabrication_ok.has_value());
  CHECK_FALSE(*rep.fabrication_ok);
  CHECK_FALSE(rep.passed());
}

TEST_CASE("solve recovers the two-segment length pin in closed form") {
  SolveOptions opt;
  opt.segments = 2;
  opt.order = 1;
  opt.starts = 8;
  opt.seed = 7;
  opt.target_length = 0.02;
  const auto out = solve(opt, permissive(), default_sensitivity());
  REQUIRE_FALSE(out.empty());
  // total length 2 l = T fixes |dk| = 2 sqrt((pi/T)^2 + omega^2)
  const double dk = 2.0 * std::sqrt(std::pow(kPi / 0.02, 2) +
                                    opt.omega * opt.omega);
  for (const auto& cand : out) {
    REQUIRE(cand.half_detunings.size() == 1);
    CHECK(std::abs(cand.half_detunings[0]) == doctest::Approx(dk).epsilon(1e-6));
    CHECK(cand.design.total_length() == doctest::Approx(0.02).epsilon(1e-7));
    CHECK(cand.residual_norm < 1e-7);
    CHECK(cand.start_index >= 0);
  }
}

TEST_CASE("solve is deterministic and sorted by flatness") {
  SolveOptions opt;
  opt.starts = 64;
  opt.seed = 1;
  const auto coeffs = default_sensitivity();
  DesignConstraints c;
  SolveDiagnostics diag;
  const auto a = solve(opt, c, coeffs, &diag);
  REQUIRE_FALSE(a.empty());
  CHECK(diag.starts == 64);
  CHECK(diag.converged > 0);
  CHECK(diag.unique > 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].report.passed());
    CHECK(a[i].design.segments.size() == 6);
    CHECK(a[i].half_detunings.size() == 3);
    if (i > 0) CHECK(a[i - 1].report.flatness <= a[i].report.flatness);
  }
  const auto b = solve(opt, c, coeffs);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].start_index == b[i].start_index);
    for (std::size_t j = 0; j < a[i].half_detunings.size(); ++j)
      CHECK(a[i].half_detunings[j] == b[i].half_detunings[j]);  // bitwise
    CHECK(a[i].report.flatness == b[i].report.flatness);
  }
  opt.max_candidates = 1;
  const auto top = solve(opt, c, coeffs);
  REQUIRE(top.size() == 1);
  CHECK(top[0].report.flatness == a[0].report.flatness);
}

TEST_CASE("solve attributes an empty search to the failing gate") {
  SolveOptions opt;
  opt.starts = 64;
  opt.seed = 1;
  DesignConstraints c;
  c.efficiency_floor = 1.0;  // unreachable for any composite
  SolveDiagnostics diag;
  const auto out = solve(opt, c, default_sensitivity(), &diag);
  CHECK(out.empty());
  CHECK(diag.converged > 0);
  CHECK(diag.rejected_efficiency > 0);
}

TEST_CASE("solve validates its options") {
  const DesignConstraints c;
  const auto coeffs = default_sensitivity();
  SolveOptions opt;
  opt.segments = 5;
  CHECK_THROWS_AS(solve(opt, c, coeffs), invalid_input);
  opt.segments = 18;
  CHECK_THROWS_AS(solve(opt, c, coeffs), invalid_input);
  opt = SolveOptions{};
  opt.order = 5;
  CHECK_THROWS_AS(solve(opt, c, coeffs), invalid_input);
  opt = SolveOptions{};
  opt.starts = 0;
  CHECK_THROWS_AS(solve(opt, c, coeffs), invalid_input);
  opt = SolveOptions{};
  opt.target_length = -0.01;
  CHECK_THROWS_AS(solve(opt, c, coeffs), invalid_input);
  opt = SolveOptions{};
  opt.omega = 0.0;
  CHECK_THROWS_AS(solve(opt, c, coeffs), invalid_input);
  opt = SolveOptions{};
  opt.max_candidates = 0;
  CHECK_THROWS_AS(solve(opt, c, coeffs), invalid_input);
  opt = SolveOptions{};
  opt.detuning_min = 500.0;
  opt.detuning_max = 100.0;
  CHECK_THROWS_AS(solve(opt, c, coeffs), invalid_input);
}

TEST_CASE("the flattest six-segment candidate keeps its measured figures") {
  const Design d = build_family(kFlatSix, kReferenceOmega);
  CHECK(d.total_length() == doctest::Approx(0.02).epsilon(1e-7));

  const auto r = residuals(d, 2);
  CHECK(std::abs(r[0]) <= 1e-9);
  CHECK(std::abs(r[1]) <= 1e-9);

  const auto coeffs = default_sensitivity();
  const DesignConstraints c;
  const RobustnessReport rep = validate(d, c, coeffs);
  CHECK(rep.passed());
  CHECK(rep.efficiency == doctest::Approx(0.151295599617).epsilon(1e-9));
  CHECK(std::abs(rep.flatness - 1.49655136715e-05) <=
        1e-9 * 1.49655136715e-05);
  CHECK(rep.window_spread == doctest::Approx(0.0137668382873).epsilon(1e-6));

  const Width90 w =
      width_90(d, coeffs, DeviationAxis::temperature, 9.6, 961);
  CHECK(w.width() == doctest::Approx(9.75485782011).epsilon(1e-9));
  // an order of magnitude wider than the 0.89 degC phase-matched reference
  CHECK(w.width() > 7.0 * 0.889953348638);
}

TEST_CASE("poling pattern cuts half-period domains and absorbs the residual") {
  const Design pp = make_reference_pp(52e-6, 0.68);
  const double mismatch = kPi / 5e-6;
  const PolingPattern pat = poling_pattern(pp, mismatch, 1e-6);
  const double half = kPi / mismatch;
  REQUIRE(pat.starts.size() == 10);  // floor(52 / 5) domains
  REQUIRE(pat.signs.size() == 10);
  CHECK(pat.total_length == 52e-6);
  CHECK(pat.starts[0] == 0.0);
  for (std::size_t i = 0; i < pat.starts.size(); ++i) {
    CHECK(pat.starts[i] == doctest::Approx(half * i).epsilon(1e-12));
    CHECK(pat.signs[i] == (i % 2 == 0 ? 1 : -1));
  }
  // the 2 um cut remainder widens the final domain instead of adding one
  const double last = pat.total_length - pat.starts.back();
  CHECK(last == doctest::Approx(7e-6).epsilon(1e-9));
}

TEST_CASE("poling sign alternation continues across segment boundaries") {
  Design d;
  d.name = "two-tone";
  d.segments.push_back(Segment{0.68, 0.0, 26e-6});
  d.segments.push_back(Segment{0.68, -kPi / 5e-6, 13e-6});
  const double mismatch = kPi / 5e-6;
  const PolingPattern pat = poling_pattern(d, mismatch, 1e-6);
  // 5 domains of 5 um, then 5 of 2.5 um
  REQUIRE(pat.starts.size() == 10);
  CHECK(pat.starts[5] == doctest::Approx(26e-6).epsilon(1e-12));
  CHECK(pat.starts[6] - pat.starts[5] == doctest::Approx(2.5e-6).epsilon(1e-9));
  for (std::size_t i = 0; i < pat.signs.size(); ++i)
    CHECK(pat.signs[i] == (i % 2 == 0 ? 1 : -1));
}

TEST_CASE("poling pattern rejects infeasible requests") {
  const Design pp = make_reference_pp(52e-6, 0.68);
  // mismatch below the segment detuning leaves no positive period
  CHECK_THROWS_AS(poling_pattern(pp, 0.0, 0.0), invalid_input);
  CHECK_THROWS_AS(poling_pattern(pp, -100.0, 0.0), invalid_input);
  // fabrication limit above the half period
  CHECK_THROWS_AS(poling_pattern(pp, kPi / 5e-6, 6e-6), invalid_input);
  // segment shorter than a single domain
  const Design tiny = make_reference_pp(4e-6, 0.68);
  CHECK_THROWS_AS(poling_pattern(tiny, kPi / 5e-6, 1e-6), invalid_input);
}
