#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "evoelim/equilibria.hpp"

using namespace evoelim;

namespace {

GameMatrix seeded_perturbation(const GameMatrix& u, SplitMix64& rng, double rho) {
  std::vector<double> d(u.entries().size());
  for (auto& v : d) v = 2.0 * rng.uniform() - 1.0;
  return perturb(u, GameMatrix(u.size(), std::move(d)), rho);
}

}  // namespace

TEST_CASE("incentive system shape") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.2, 0.1));
  const CESystem sys = ce_polytope(u);
  CHECK(sys.incentive_rows.size() == 24);  // 2 * 4 * 3
  CHECK(sys.num_vars() == 16);
  for (const auto& row : sys.incentive_rows) CHECK(row.coeffs.size() == 16);
}

TEST_CASE("known feasible points satisfy the rows exactly") {
  // Coordination-style 2x2 block where the uniform joint distribution works.
  const GameMatrix pennies(2, {1.0, -1.0, -1.0, 1.0});
  const CESystem sys2 = ce_polytope(pennies);
  const JointDistribution uniform(2, {0.25, 0.25, 0.25, 0.25});
  CHECK(sys2.max_violation(uniform) <= 1e-12);

  const GameMatrix u = build_rps4(RPS4Params::valid(0.2, 0.1));
  const CESystem sys4 = ce_polytope(u);
  const JointDistribution safe_pair =
      JointDistribution::product(MixedStrategy::vertex(4, 3), MixedStrategy::vertex(4, 3));
  CHECK(sys4.max_violation(safe_pair) <= 1e-12);

  // At alpha = 0 the cyclic mix paired with itself is also an equilibrium.
  const GameMatrix g0 = build_rps4(RPS4Params::g0(0.2));
  const MixedStrategy mix({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0});
  CHECK(ce_polytope(g0).max_violation(JointDistribution::product(mix, mix)) <= 1e-12);
}

TEST_CASE("mass bounds concentrate on the safe pair for valid parameters") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.2, 0.1));
  const auto bounds = ce_mass_bounds(u);
  CHECK(bounds[3][3] >= 1.0 - 1e-8);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == 3 && j == 3) continue;
      CHECK(bounds[i][j] <= 1e-8);
    }
  }
  const JointDistribution safe_pair =
      JointDistribution::product(MixedStrategy::vertex(4, 3), MixedStrategy::vertex(4, 3));
  CHECK(ce_uniqueness_gap(u, safe_pair) <= 1e-8);
}

TEST_CASE("alpha = 0 reopens the polytope") {
  const GameMatrix g0 = build_rps4(RPS4Params::g0(0.2));
  const auto bounds = ce_mass_bounds(g0);
  CHECK(bounds[0][0] >= 1.0 / 9.0 - 1e-8);  // the cyclic product point is feasible
  CHECK(bounds[3][3] >= 1.0 - 1e-8);
}

TEST_CASE("coordination game peaks on both diagonal cells") {
  const GameMatrix coord(2, {1.0, 0.0, 0.0, 1.0});
  const auto bounds = ce_mass_bounds(coord);
  CHECK(bounds[0][0] >= 1.0 - 1e-8);
  CHECK(bounds[1][1] >= 1.0 - 1e-8);
}

TEST_CASE("used strategies") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.2, 0.1));
  CHECK(strategies_used_in_ce(u) == std::vector<int>{3});

  const GameMatrix g0 = build_rps4(RPS4Params::g0(0.2));
  CHECK(strategies_used_in_ce(g0) == std::vector<int>{0, 1, 2, 3});

  CHECK(strategies_used_in_ce(u, 2.0).empty());
  CHECK_THROWS_AS(strategies_used_in_ce(u, 0.0), ValidationError);
}

TEST_CASE("used strategies survive seeded perturbations") {
  SplitMix64 rng(1001);
  const GameMatrix base = build_rps4(RPS4Params::valid(0.2, 0.1));
  for (int k = 0; k < 20; ++k) {
    const GameMatrix g = seeded_perturbation(base, rng, 1e-3);
    CHECK(strategies_used_in_ce(g) == std::vector<int>{3});
  }
}

TEST_CASE("nash reports") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const NashReport safe = nash_report(u, MixedStrategy::vertex(4, 3));
  CHECK(std::fabs(safe.residual) <= 1e-12);
  CHECK(safe.strict);

  const NashReport mix_report =
      nash_report(u, MixedStrategy({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0}));
  CHECK(mix_report.residual == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_FALSE(mix_report.strict);

  const GameMatrix g0 = build_rps4(RPS4Params::g0(0.1));
  for (double lambda : {0.0, 0.3, 0.7, 1.0}) {
    const double third = lambda / 3.0;
    const NashReport seg = nash_report(g0, MixedStrategy({third, third, third, 1.0 - lambda}));
    CHECK(std::fabs(seg.residual) <= 1e-12);
    CHECK_FALSE(seg.strict);
  }
}

TEST_CASE("symmetric Nash vertices sit inside the polytope bounds") {
  for (const GameMatrix& u : {build_rps4(RPS4Params::valid(0.1, 0.1)),
                              build_rps4(RPS4Params::g0(0.1)),
                              GameMatrix(2, {1.0, 0.0, 0.0, 1.0})}) {
    const auto bounds = ce_mass_bounds(u);
    for (int i = 0; i < u.size(); ++i) {
      const NashReport rep = nash_report(u, MixedStrategy::vertex(u.size(), i));
      if (rep.residual <= 1e-9) {
        CHECK(bounds[i][i] >= 1.0 - 1e-7);
      }
    }
  }
}

TEST_CASE("extension equilibria reduce onto the safe pair") {
  const GameMatrix base = build_rps4(RPS4Params::valid(0.1, 0.1));
  SplitMix64 rng(99);
  for (int round = 0; round < 3; ++round) {
    std::vector<MixedStrategy> extras;
    extras.emplace_back(simplex_sample(rng, 4));
    extras.emplace_back(simplex_sample(rng, 4));
    const ExtendedGame g = extend_with_mixed(base, extras);
    const CESystem sys = ce_polytope(g.uext);
    const int next = g.uext.size();
    // Every coordinate maximizer is itself an equilibrium of the extension;
    // its reduction must put all mass on the safe pair of the base game.
    for (int k = 0; k < next; ++k) {
      for (int l = 0; l < next; ++l) {
        std::vector<double> obj(static_cast<std::size_t>(next) * next, 0.0);
        obj[static_cast<std::size_t>(sys.flat_index(k, l))] = 1.0;
        const LPOutcome out = solve(sys.program(std::move(obj), LPDirection::Maximize));
        REQUIRE(out.status == LPStatus::Optimal);
        std::vector<double> clamped = out.x;
        for (auto& v : clamped) v = std::max(v, 0.0);
        const JointDistribution mu = induce_distribution(g, JointDistribution(next, clamped));
        CHECK(mu.at(3, 3) >= 1.0 - 1e-6);
      }
    }
  }
}
