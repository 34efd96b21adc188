#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "evoelim/analysis.hpp"
#include "evoelim/integrate.hpp"
#include "evoelim/oracles.hpp"

using namespace evoelim;

TEST_CASE("vertices are rest points of the smooth flow") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const Trajectory traj = integrate_smooth(DynamicsSpec::replicator(), u,
                                           MixedStrategy::vertex(4, 1), 10.0, 1e-9, 1.0);
  for (const auto& sample : traj.samples) {
    CHECK(sample.x[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("trajectory bookkeeping invariants") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const MixedStrategy x0({0.5, 0.3, 0.19, 0.01});
  const Trajectory traj = integrate_smooth(DynamicsSpec::replicator(), u, x0, 30.0, 1e-9, 0.5);
  REQUIRE(traj.samples.size() == 61);
  CHECK(traj.samples.front().t == 0.0);
  CHECK(traj.samples.back().t == 30.0);
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    CHECK(traj.samples[i].t > traj.samples[i - 1].t);
    double total = 0.0;
    for (int c = 0; c < 4; ++c) {
      CHECK(traj.samples[i].x[c] >= 0.0);
      total += traj.samples[i].x[c];
    }
    CHECK(std::fabs(total - 1.0) <= 1e-12);
  }
  CHECK(traj.stats.max_simplex_drift <= 1e-7);
  CHECK(traj.stats.steps > 0);
}

TEST_CASE("smooth integrator input validation") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const MixedStrategy x0({0.25, 0.25, 0.25, 0.25});
  CHECK_THROWS_AS(integrate_smooth(DynamicsSpec::best_response(), u, x0, 1.0, 1e-9),
                  UnsupportedOperation);
  CHECK_THROWS_AS(integrate_smooth(DynamicsSpec::replicator(), u, x0, 0.0, 1e-9), ValidationError);
  CHECK_THROWS_AS(integrate_smooth(DynamicsSpec::replicator(), u, x0, 1.0, 1e-2), ValidationError);
  CHECK_THROWS_AS(integrate_smooth(DynamicsSpec::replicator(), u, x0, 1.0, 1e-13), ValidationError);
}

TEST_CASE("excess-payoff flow eliminates the safe strategy off the equilibrium segment") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.01));
  const MixedStrategy x0({0.5, 0.25, 0.15, 0.1});
  const Trajectory traj = integrate_smooth(DynamicsSpec::bnn(), u, x0, 200.0, 1e-9, 5.0);
  CHECK(traj.samples.back().x[3] < 1e-4);
}

TEST_CASE("replicator approaches the boundary cycle; two tolerances agree on it") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const MixedStrategy x0({0.5, 0.3, 0.19, 0.01});
  for (double tol : {1e-9, 1e-10}) {
    const Trajectory traj = integrate_smooth(DynamicsSpec::replicator(), u, x0, 150.0, tol, 5.0);
    const auto& last = traj.samples.back().x;
    CHECK(std::cbrt(last[0] * last[1] * last[2]) < 1e-3);
    CHECK(last[3] < 1e-3);
  }
}

TEST_CASE("event-driven run: cyclic switching and the exact safe-share law") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const MixedStrategy x0({0.7, 0.15, 0.1, 0.05});
  const BRTrajectory traj = integrate_br(u, x0, 30.0);
  REQUIRE(!traj.switch_events.empty());
  for (const auto& ev : traj.switch_events) {
    CHECK(ev.new_br.front() == (ev.old_br.front() + 1) % 3);
  }
  const double got = traj.state_at(30.0)[3];
  const double want = 0.05 * std::exp(-30.0);
  CHECK(std::fabs(got - want) / want <= 1e-12);

  // Payoff continuity at every switch: the incoming strategy attains the
  // outgoing one's payoff.
  for (const auto& ev : traj.switch_events) {
    const auto p = payoff_vector(u, traj.state_at(ev.t));
    CHECK(std::fabs(p[ev.new_br.front()] - p[ev.old_br.front()]) <= 1e-9);
  }
}

TEST_CASE("event-driven run rejects starts outside the covered class") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  CHECK_THROWS_AS(integrate_br(u, MixedStrategy({0.01, 0.01, 0.01, 0.97}), 10.0), ValidationError);

  // A switch state of a running trajectory has two exactly tied best replies.
  const BRTrajectory traj = integrate_br(u, MixedStrategy({0.7, 0.15, 0.1, 0.05}), 10.0);
  REQUIRE(!traj.switch_events.empty());
  const MixedStrategy tied = traj.state_at(traj.switch_events.front().t);
  CHECK_THROWS_AS(integrate_br(u, tied, 10.0), ValidationError);
}

TEST_CASE("first switch from the first vertex brings in its cyclic successor") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const MixedStrategy x0({0.15, 0.1, 0.7, 0.05});  // unique best reply: strategy 1
  REQUIRE(best_responses(u, x0) == std::vector<int>{0});
  const BRTrajectory traj = integrate_br(u, x0, 10.0);
  REQUIRE(!traj.switch_events.empty());
  CHECK(traj.switch_events.front().old_br.front() == 0);
  CHECK(traj.switch_events.front().new_br.front() == 1);
}

TEST_CASE("residual decay of the triangle monitor along event-driven runs") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const BRDecayReport rep = br_decay_report(u, MixedStrategy({0.7, 0.15, 0.1, 0.05}), 40.0, 0.5);
  CHECK(rep.max_w_ratio_error <= 1e-6);
  CHECK(rep.x4_ratio_error <= 1e-9);
  CHECK(rep.w_end <= rep.w_start * std::exp(-40.0) * (1.0 + 1e-6));
}

TEST_CASE("switch gaps stay bounded away from zero after burn-in") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const BRTrajectory traj = integrate_br(u, MixedStrategy({0.7, 0.15, 0.1, 0.05}), 40.0);
  double min_gap = 1e9;
  for (std::size_t e = 1; e < traj.switch_events.size(); ++e) {
    if (traj.switch_events[e].t < 2.0) continue;
    min_gap = std::min(min_gap, traj.switch_events[e].t - traj.switch_events[e - 1].t);
  }
  CHECK(min_gap > 1e-3);
}

TEST_CASE("event-driven path matches the naive inclusion oracle") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  SplitMix64 rng(31);
  int done = 0;
  while (done < 3) {
    const MixedStrategy x0(simplex_sample(rng, 4));
    const auto br = best_responses(u, x0);
    if (br.size() != 1 || br.front() > 2) continue;
    ++done;
    const BRTrajectory exact = integrate_br(u, x0, 10.0);
    const auto euler = euler_br_inclusion(u, x0, 10.0, 1e-4, 0.01);
    double gap = 0.0;
    for (const auto& sample : euler) {
      const MixedStrategy x = exact.state_at(sample.t);
      for (int c = 0; c < 4; ++c) gap = std::max(gap, std::fabs(x[c] - sample.x[c]));
    }
    CHECK(gap <= 1e-3);
  }
}

TEST_CASE("sampling an event-driven trajectory") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const BRTrajectory traj = integrate_br(u, MixedStrategy({0.7, 0.15, 0.1, 0.05}), 10.0);
  const auto samples = traj.sample(0.25);
  REQUIRE(samples.size() == 41);
  CHECK(samples.back().t == 10.0);
  for (std::size_t i = 1; i < samples.size(); ++i) CHECK(samples[i].t > samples[i - 1].t);
  CHECK_THROWS_AS(traj.sample(0.0), ValidationError);
  CHECK_THROWS_AS(traj.state_at(11.0), ValidationError);
}
