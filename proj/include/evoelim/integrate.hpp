#pragma once

#include <cstdint>
#include <vector>

#include "evoelim/br_core.hpp"
#include "evoelim/dynamics.hpp"
#include "evoelim/game.hpp"

namespace evoelim {

struct TrajectorySample {
  double t = 0.0;
  MixedStrategy x;
};

struct TrajectoryStats {
  long long steps = 0;
  long long rejected_steps = 0;
  double max_simplex_drift = 0.0;  // worst pre-renormalization deviation
};

struct Trajectory {
  DynamicsSpec spec;
  GameMatrix game;
  std::vector<TrajectorySample> samples;
  TrajectoryStats stats;
};

class IntegrationError : public IntegrationFailureSignal {
 public:
  IntegrationError(const std::string& what, Trajectory partial)
      : IntegrationFailureSignal(what), partial_trajectory(std::move(partial)) {}
  Trajectory partial_trajectory;
};

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) with clamping and
// renormalization after each accepted step; pre-renormalization drift is
// recorded in stats. Samples land exactly on the stride grid plus the
// endpoint. stride = 0 picks horizon / 256.
Trajectory integrate_smooth(const DynamicsSpec& spec, const GameMatrix& u, const MixedStrategy& x0,
                            double horizon, double tol, double stride = 0.0);

struct BRSegment {
  double t0 = 0.0;
  double t1 = 0.0;
  int target = 0;  // 0-based vertex the segment points at
  MixedStrategy x0;
};

struct BRSwitchEvent {
  double t = 0.0;
  std::vector<int> old_br;
  std::vector<int> new_br;
};

// Exact piecewise-exponential solution of the best-response inclusion.
struct BRTrajectory {
  GameMatrix game;
  double horizon = 0.0;
  std::vector<BRSegment> segments;
  std::vector<BRSwitchEvent> switch_events;

  MixedStrategy state_at(double t) const;
  std::vector<TrajectorySample> sample(double stride) const;
};

// Requires a unique initial best response among the cyclic strategies 1..3;
// anything else (ties, or the safe strategy best) is rejected.
BRTrajectory integrate_br(const GameMatrix& u, const MixedStrategy& x0, double horizon);

// Decay diagnostics of a best-response run, computed in extended precision so
// that the exponential laws remain testable far below double rounding noise:
// x4(t) = x4(0) e^{-t} and W(x(t)) = W(x(0)) e^{-t} with W = max(x4, |V|).
struct BRDecayReport {
  double w_start = 0.0;
  double w_end = 0.0;
  double w_ratio_error = 0.0;   // |w_end / (w_start e^{-T}) - 1|
  double x4_ratio_error = 0.0;  // |x4_end / (x4_start e^{-T}) - 1|
  double max_w_ratio_error = 0.0;  // worst over the sample grid
  int num_segments = 0;
};
BRDecayReport br_decay_report(const GameMatrix& u, const MixedStrategy& x0, double horizon,
                              double stride = 0.5);

}  // namespace evoelim
