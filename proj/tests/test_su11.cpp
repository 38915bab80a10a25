#include "dmcs/ode_oracle.hpp"
#include "dmcs/su11.hpp"

#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace dmcs;

namespace {

Design two_segment_sample() {
  Design d;
  d.name = "sample";
  d.segments = {Segment{3.0, 4.0, 0.7}, Segment{2.0, -1.0, 0.9}};
  return d;
}

Design quarter_period_pair(double omega, double dk) {
  const double g = std::sqrt(0.25 * dk * dk - omega * omega);
  const double l = std::numbers::pi / (2.0 * g);
  Design d;
  d.name = "pair";
  d.segments = {Segment{omega, dk, l}, Segment{omega, -dk, l}};
  return d;
}

}  // namespace

TEST_CASE("hyperbolic segment reproduces cosh/sinh at unit gain") {
  const Su11Matrix m = segment_matrix(Segment{1.0, 0.0, 1.0}, 0.0);
  CHECK(m.alpha.real() == doctest::Approx(1.5430806348152438).epsilon(1e-14));
  CHECK(m.alpha.imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m.beta.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m.beta.imag() == doctest::Approx(-1.1752011936438015).epsilon(1e-14));
}

TEST_CASE("harmonic quarter period hits the closed-form pair mean") {
  // omega=100, delta_k=250 puts the segment at g=75; a quarter period
  // l=pi/150 lands on |beta|^2 = (omega/g)^2 = 16/9
  const double l = std::numbers::pi / 150.0;
  const Su11Matrix m = segment_matrix(Segment{100.0, 250.0, l}, 0.0);
  CHECK(std::norm(m.beta) == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
  CHECK(std::norm(m.alpha) == doctest::Approx(25.0 / 9.0).epsilon(1e-14));
  CHECK(m.alpha.real() ==
        doctest::Approx(0.83333333333333333).epsilon(1e-13));
  CHECK(m.alpha.imag() ==
        doctest::Approx(-1.4433756729740644).epsilon(1e-13));
  CHECK(m.beta.real() ==
        doctest::Approx(-0.66666666666666667).epsilon(1e-13));
  CHECK(m.beta.imag() == doctest::Approx(1.1547005383792515).epsilon(1e-13));
}

TEST_CASE("phased single segment matches the reference evaluation") {
  const Su11Matrix m = segment_matrix(Segment{3.0, 4.0, 0.7}, 0.3);
  CHECK(m.alpha.real() == doctest::Approx(2.249023385045508).epsilon(1e-13));
  CHECK(m.alpha.imag() == doctest::Approx(-2.1351862563225936).epsilon(1e-13));
  CHECK(m.beta.real() == doctest::Approx(-2.9291424422732102).epsilon(1e-13));
  CHECK(m.beta.imag() == doctest::Approx(-0.19300541066037955).epsilon(1e-13));
}

TEST_CASE("two-segment composite matches the reference evaluation") {
  const Su11Matrix m = design_matrix(two_segment_sample(), 0.3);
  CHECK(m.alpha.real() == doctest::Approx(10.963813444444413).epsilon(1e-12));
  CHECK(m.alpha.imag() == doctest::Approx(-13.365689939710907).epsilon(1e-12));
  CHECK(m.beta.real() == doctest::Approx(-17.209839752818215).epsilon(1e-12));
  CHECK(m.beta.imag() == doctest::Approx(1.2916224260159416).epsilon(1e-12));
  CHECK(m.pseudo_unitarity_defect() <= 1e-12 * std::norm(m.alpha));
}

TEST_CASE("design_matrix equals segment_matrix for a single segment") {
  const Segment seg{2.5, -700.0, 0.004};
  Design d;
  d.segments = {seg};
  for (double eps : {-120.0, 0.0, 55.5}) {
    const Su11Matrix a = design_matrix(d, eps);
    const Su11Matrix b = segment_matrix(seg, eps);
    CHECK(std::abs(a.alpha - b.alpha) <= 1e-15 * std::abs(b.alpha));
    CHECK(std::abs(a.beta - b.beta) <= 1e-14 * std::abs(b.alpha));
  }
}

TEST_CASE("anti-symmetric pair is even in the detuning error") {
  const Design d = quarter_period_pair(100.0, 250.0);
  auto mu = [&](double eps) { return std::norm(design_matrix(d, eps).beta); };
  CHECK(mu(50.0) == doctest::Approx(11.954607945980815).epsilon(1e-12));
  CHECK(mu(-50.0) == doctest::Approx(11.954607945980815).epsilon(1e-12));
  CHECK(mu(17.3) == doctest::Approx(18.580946506523716).epsilon(1e-12));
  CHECK(mu(-17.3) == doctest::Approx(mu(17.3)).epsilon(1e-13));
}

TEST_CASE("composition order and chain composition agree") {
  const Su11Matrix a = segment_matrix(Segment{3.0, 4.0, 0.7}, 0.1);
  const Su11Matrix b = segment_matrix(Segment{2.0, -1.0, 0.9}, 0.1);
  const Su11Matrix c = segment_matrix(Segment{0.5, 30.0, 0.02}, 0.1);
  const Su11Matrix manual = compose(c, compose(b, a));
  const Su11Matrix chained = compose(std::vector<Su11Matrix>{a, b, c});
  CHECK(std::abs(manual.alpha - chained.alpha) <=
        1e-14 * std::abs(manual.alpha));
  CHECK(std::abs(manual.beta - chained.beta) <=
        1e-14 * std::abs(manual.alpha));
  const Su11Matrix id = compose(identity_matrix(), a);
  CHECK(id.alpha == a.alpha);
  CHECK(id.beta == a.beta);
}

TEST_CASE("pseudo-unitarity holds for random segments and composites") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> omega(0.0, 200.0);
  std::uniform_real_distribution<double> dk(-8000.0, 8000.0);
  std::uniform_real_distribution<double> len(1e-5, 0.004);
  std::uniform_real_distribution<double> err(-400.0, 400.0);

  for (int i = 0; i < 1000; ++i) {
    const Su11Matrix m =
        segment_matrix(Segment{omega(rng), dk(rng), len(rng)}, err(rng));
    const double scale = std::max(1.0, std::norm(m.alpha));
    CHECK(m.pseudo_unitarity_defect() <= 1e-12 * scale);
  }
  std::uniform_int_distribution<int> count(1, 8);
  for (int i = 0; i < 100; ++i) {
    Design d;
    const int n = count(rng);
    for (int j = 0; j < n; ++j)
      d.segments.push_back(Segment{omega(rng), dk(rng), len(rng)});
    const Su11Matrix m = design_matrix(d, err(rng));
    const double scale = std::max(1.0, std::norm(m.alpha));
    CHECK(m.pseudo_unitarity_defect() <= 1e-12 * scale);
  }
}

TEST_CASE("segment matrix is continuous across the degenerate gain point") {
  // straddle q = 0 by tuning delta_k through 2*omega
  const double omega = 40.0;
  const double l = 0.01;
  const Su11Matrix below =
      segment_matrix(Segment{omega, 2.0 * omega * (1.0 - 1e-9), l}, 0.0);
  const Su11Matrix at =
      segment_matrix(Segment{omega, 2.0 * omega, l}, 0.0);
  const Su11Matrix above =
      segment_matrix(Segment{omega, 2.0 * omega * (1.0 + 1e-9), l}, 0.0);
  CHECK(std::abs(below.alpha - at.alpha) <= 1e-7);
  CHECK(std::abs(above.alpha - at.alpha) <= 1e-7);
  CHECK(std::abs(below.beta - at.beta) <= 1e-7);
  CHECK(std::abs(above.beta - at.beta) <= 1e-7);
}

TEST_CASE("zero coupling leaves the vacuum untouched") {
  const Su11Matrix m = segment_matrix(Segment{0.0, 500.0, 0.003}, 25.0);
  CHECK(std::abs(m.beta) == 0.0);
  CHECK(std::abs(std::abs(m.alpha) - 1.0) <= 1e-14);
}

TEST_CASE("input validation rejects broken segments and designs") {
  CHECK_THROWS_AS(segment_matrix(Segment{-1.0, 0.0, 0.01}, 0.0),
                  invalid_input);
  CHECK_THROWS_AS(segment_matrix(Segment{1.0, 0.0, 0.0}, 0.0), invalid_input);
  CHECK_THROWS_AS(segment_matrix(Segment{1.0, 0.0, -0.3}, 0.0),
                  invalid_input);
  Design empty;
  CHECK_THROWS_AS(design_matrix(empty, 0.0), invalid_input);
  Design bad = two_segment_sample();
  bad.work_temperature_c = std::nan("");
  CHECK_THROWS_AS(design_matrix(bad, 0.0), invalid_input);
}

TEST_CASE("hyperboloid point sits on the invariant surface") {
  const Su11Matrix one = segment_matrix(Segment{1.0, 0.0, 1.0}, 0.0);
  const HyperboloidPoint h = hyperboloid_point(one);
  CHECK(h.w == doctest::Approx(2.7621956910836315).epsilon(1e-14));
  CHECK(h.invariant_defect() <= 1e-12);

  const HyperboloidPoint vac = hyperboloid_point(identity_matrix());
  CHECK(vac.u == 0.0);
  CHECK(vac.v == 0.0);
  CHECK(vac.w == 0.0);
}

TEST_CASE("trajectory sampling contract and endpoint consistency") {
  const Design d = two_segment_sample();
  const auto points = trajectory(d, 0.3, 5);
  REQUIRE(points.size() == 1 + d.segments.size() * 5);
  CHECK(points.front().z == 0.0);
  CHECK(points.front().mu == 0.0);
  CHECK(points.back().z == doctest::Approx(d.total_length()).epsilon(1e-15));

  const double mu_end = std::norm(design_matrix(d, 0.3).beta);
  CHECK(points.back().mu == doctest::Approx(mu_end).epsilon(1e-12));
  for (std::size_t i = 1; i < points.size(); ++i)
    CHECK(points[i].z > points[i - 1].z);
  for (const auto& p : points) {
    const double scale = std::max(1.0, (p.point.w + 1.0) * (p.point.w + 1.0));
    CHECK(p.point.invariant_defect() <= 1e-10 * scale);
  }
  CHECK_THROWS_AS(trajectory(d, 0.0, 1), invalid_input);
}

TEST_CASE("closed form agrees with the adaptive integrator") {
  std::vector<Design> designs;
  designs.push_back(two_segment_sample());
  designs.push_back(quarter_period_pair(100.0, 250.0));
  designs.push_back(make_reference_pp(0.02, 0.68));
  {
    Design d;
    d.segments = {Segment{0.68, 1615.2, 0.00194}, Segment{0.68, 417.3, 0.0075},
                  Segment{0.68, -5967.0, 0.00053},
                  Segment{0.68, 5967.0, 0.00053},
                  Segment{0.68, -417.3, 0.0075},
                  Segment{0.68, -1615.2, 0.00194}};
    designs.push_back(d);
  }
  for (const auto& d : designs) {
    for (double eps : {0.0, 77.7, -140.0}) {
      const Su11Matrix closed = design_matrix(d, eps);
      const Su11Matrix brute = ode_oracle(d, eps);
      const double guard = 1e-12 * std::abs(closed.alpha);
      CHECK(std::abs(closed.alpha - brute.alpha) <=
            1e-8 * std::max(std::abs(closed.alpha), guard));
      CHECK(std::abs(closed.beta - brute.beta) <=
            1e-8 * std::max(std::abs(closed.beta), guard));
    }
  }
}

TEST_CASE("reference phase-matched design builder") {
  const Design d = make_reference_pp(0.02, 0.68);
  REQUIRE(d.segments.size() == 1);
  CHECK(d.segments[0].delta_k == 0.0);
  CHECK(d.total_length() == 0.02);
  CHECK(d.work_temperature_c == 37.0);
  CHECK_THROWS_AS(make_reference_pp(-0.02, 0.68), invalid_input);
}
