#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "evoelim/dynamics.hpp"
#include "evoelim/game.hpp"
#include "evoelim/integrate.hpp"

namespace evoelim {

// The monitor functions evaluated at one point. Each one vanishes exactly on
// the set whose distance it stands in for: W on the attracting triangle of
// the best-response flow, gamma_residual on the boundary cycle, V0 on the
// segment of symmetric equilibria of the alpha = 0 game.
struct LyapunovRecord {
  double V = 0.0;     // max over the cyclic strategies of payoff minus diagonal term
  double W = 0.0;     // max(x4, |V|)
  double V0 = 0.0;    // half the squared norm of positive excess payoffs under u0
  double Vapp = 0.0;  // 3 (x1 x2 x3)^[1/3] / (x1 + x2 + x3)
  bool vapp_defined = true;  // false exactly at the safe vertex
  double gamma_residual = 0.0;  // max(x4, (x1 x2 x3)^[1/3])
};

LyapunovRecord lyapunov_values(const GameMatrix& u, const GameMatrix& u0, const MixedStrategy& x);

// Potential for the excess-payoff family: sum_i F(k_i) with F the
// antiderivative of f (identity f gives the half-sum of squares).
double bnn_potential(const GameMatrix& u0, const MixedStrategy& x,
                     const FCatalog& f = FCatalog::identity());

// Time derivative of the potential along the matching excess-payoff flow:
// fbar^2 [ (q - x) . U0 (q - x) - (q - x) . U0 x ] with q the normalized
// transformed excesses. Zero at rest points (kbar = 0).
double bnn_lyapunov_derivative(const GameMatrix& u0, const MixedStrategy& x,
                               const FCatalog& f = FCatalog::identity());

// (q - p) . U0 (q - p) for p the safe vertex: the quadratic form whose
// uniform positive lower bound drives the tube argument.
double bnn_q_form(const GameMatrix& u0, const MixedStrategy& x,
                  const FCatalog& f = FCatalog::identity());

// Growth rates of the dynamics at the three cyclic vertices: c[i][j] = g_j(e_i).
struct CharMatrix {
  std::array<std::array<double, 4>, 3> c{};
};

CharMatrix characteristic_matrix(const DynamicsSpec& spec, const GameMatrix& u);

// Stability certificate for the boundary cycle: p > 0 with Cp < 0, found by
// maximizing the common slack.
struct Certificate {
  bool present = false;
  std::array<double, 4> p{};
  double slack = 0.0;
};

Certificate hofbauer_certificate(const CharMatrix& c);

// The nine strict vertex inequalities: g4(e_i) < 0 and
// 0 < g_{i+1}(e_i) < -g_{i-1}(e_i) for each cyclic vertex.
bool vertex_inequality_check(const DynamicsSpec& spec, const GameMatrix& u);

// Within-boundary counterpart: the 3x3 cyclic block satisfies C^ p^ < 0 at
// p^ = (1/3, 1/3, 1/3), i.e. every cyclic row sum is negative.
bool boundary_cycle_condition(const CharMatrix& c);

struct SwitchGapRecord {
  int index = 0;      // position in the switch-event sequence
  int strategy = 0;   // 0-based strategy that became best at this event
  double t = 0.0;
  double g_measured = 0.0;    // max payoff spread among the cyclic strategies
  double predicted_next = 0.0;  // gap predicted for this strategy's next event
};

// Measured payoff gaps at switch times plus the one-cycle recurrence
// prediction. Requires the cyclic margins alpha_i, beta_i of u to be positive.
std::vector<SwitchGapRecord> switching_gaps(const BRTrajectory& traj, const GameMatrix& u);

// Fixed point of the one-cycle gap recurrence started at the given strategy.
double gap_fixed_point(const GameMatrix& u, int strategy = 0);

// Every switch satisfies the improvement principle: the incoming strategy
// does at least as well against the old target as the old target against
// itself, strictly when it was not already a best response.
bool improvement_check(const BRTrajectory& traj, const GameMatrix& u);

struct EliminationVerdict {
  bool eliminated = false;
  double final_mass = 0.0;
  double fitted_rate = 0.0;  // least-squares slope of log x_i over the final third
};

EliminationVerdict elimination_status(const std::vector<TrajectorySample>& samples, int strategy,
                                      double threshold = 1e-8);
EliminationVerdict elimination_status(const Trajectory& traj, int strategy,
                                      double threshold = 1e-8);
EliminationVerdict elimination_status(const BRTrajectory& traj, int strategy,
                                      double threshold = 1e-8, double stride = 0.1);

// Max relative violation of the share identity
// x'_k(T) = x'_k(0) prod_i (x'_i(T)/x'_i(0))^{p^k_i} along a replicator run
// of the extended game. Requires the base coordinates to stay above 1e-6.
double conservation_check(const Trajectory& traj, const ExtendedGame& g);

struct SamplerSpec {
  std::uint64_t seed = 1;
  int count = 100;
  std::function<bool(const MixedStrategy&)> filter;  // empty = accept all
  bool exclude_failures = false;  // drop failed integrations from the denominator
};

struct BasinCriterion {
  int strategy = 3;       // 0-based strategy whose elimination is tested
  double threshold = 1e-8;
  double horizon = 0.0;   // 0 picks the per-dynamics default
  double tol = 1e-9;      // smooth-integrator tolerance
};

struct BasinResult {
  double fraction = 0.0;
  int satisfied = 0;
  int evaluated = 0;
  int failures = 0;
};

double default_elimination_horizon(const DynamicsSpec& spec);

// Fraction of seeded uniform simplex samples (exponential-spacings sampler,
// SplitMix64) whose trajectory eliminates the chosen strategy. Deterministic
// given the seed, independent of the worker count.
BasinResult basin_fraction(const DynamicsSpec& spec, const GameMatrix& u, const SamplerSpec& sampler,
                           const BasinCriterion& criterion, int jobs = 1);

}  // namespace evoelim
