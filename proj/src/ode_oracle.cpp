#include "dmcs/ode_oracle.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <complex>

namespace dmcs {

namespace {

// Full 2x2 propagator packed row-major: u = {U11, U12, U21, U22}.
using State = std::array<std::complex<double>, 4>;

// dU/dz = [[0, f(z)], [conj(f(z)), 0]] U with f = -i w exp(-i phi(z)) and
// phi accumulated continuously across segment boundaries.  Solving this from
// the identity yields the same propagator as the closed-form product.
struct Generator {
  double omega;
  double dk;    // effective mismatch inside this segment
  double phi0;  // accumulated mismatch phase at segment entry
  double z0;    // absolute position of segment entry

  void operator()(const State& u, State& dudz, double z) const {
    const double phi = phi0 + dk * (z - z0);
    const std::complex<double> f =
        std::complex<double>(0.0, -omega) *
        std::exp(std::complex<double>(0.0, -phi));
    const std::complex<double> fc = std::conj(f);
    dudz[0] = f * u[2];
    dudz[1] = f * u[3];
    dudz[2] = fc * u[0];
    dudz[3] = fc * u[1];
  }
};

struct StepCounter {
  long* steps;
  long max_steps;
  void operator()(const State&, double) const {
    if (++(*steps) > max_steps)
      throw numerical_error("oracle exceeded step budget");
  }
};

Su11Matrix integrate_once(const Design& design, double epsilon, double abs_tol,
                          double rel_tol, long max_steps) {
  namespace ode = boost::numeric::odeint;
  using Stepper = ode::runge_kutta_cash_karp54<State>;

  State u{{{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}};
  long steps = 0;
  double phi = 0.0;
  double z = 0.0;
  for (const auto& seg : design.segments) {
    const double dk = seg.delta_k + epsilon;
    Generator gen{seg.omega, dk, phi, z};
    const double dz0 = seg.length / 64.0;
    ode::integrate_adaptive(ode::make_controlled<Stepper>(abs_tol, rel_tol),
                            gen, u, z, z + seg.length, dz0,
                            StepCounter{&steps, max_steps});
    phi += dk * seg.length;
    z += seg.length;
  }
  return Su11Matrix{u[0], u[1]};
}

}  // namespace

Su11Matrix ode_oracle(const Design& design, double epsilon, long max_steps) {
  ensure_valid(design);

  const Su11Matrix coarse =
      integrate_once(design, epsilon, 1e-12, 1e-9, max_steps);
  const Su11Matrix fine =
      integrate_once(design, epsilon, 1e-14, 1e-11, max_steps);

  const double scale =
      std::max({std::abs(fine.alpha), std::abs(fine.beta), 1.0});
  const double drift = std::max(std::abs(coarse.alpha - fine.alpha),
                                std::abs(coarse.beta - fine.beta));
  if (drift > 1e-7 * scale)
    throw oracle_failure("oracle refinement did not converge");
  if (fine.pseudo_unitarity_defect() > 1e-8 * scale * scale)
    throw oracle_failure("oracle lost pseudo-unitarity");
  return fine;
}

}  // namespace dmcs
