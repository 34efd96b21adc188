#pragma once

// Reference implementations used only by verification suites and tests.
// Deliberately naive and independent of the production integrators.

#include <vector>

#include "evoelim/game.hpp"
#include "evoelim/integrate.hpp"

namespace evoelim {

// Explicit Euler on the best-response inclusion: at every step move straight
// at the vertex with the highest payoff (lowest index on exact ties). No
// event detection, no closed forms.
std::vector<TrajectorySample> euler_br_inclusion(const GameMatrix& u, const MixedStrategy& x0,
                                                 double horizon, double step,
                                                 double sample_stride);

}  // namespace evoelim
