#pragma once

#include "dmcs/su11.hpp"
#include "dmcs/types.hpp"

namespace dmcs {

// Brute-force propagator, independent of every closed-form code path: the
// coupled pair equations are integrated segment by segment with an embedded
// adaptive Runge-Kutta pair at relative tolerance 1e-10, with the mismatch
// phase accumulated continuously across boundaries. The result is certified
// by a second run at tighter tolerance plus a structure check on the
// integrated 2x2 matrix; disagreement or a blown step budget raises
// oracle_failure. max_steps caps the accepted steps per run.
Su11Matrix ode_oracle(const Design& design, double epsilon,
                      long max_steps = 2000000);

}  // namespace dmcs
