#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "evoelim/game.hpp"

using namespace evoelim;

namespace {

// Independent bilinear form, written out longhand for oracle use.
double slow_bilinear(const GameMatrix& u, const std::vector<double>& a,
                     const std::vector<double>& b) {
  double acc = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    for (int j = 0; j < u.size(); ++j) acc += a[i] * u.at(i, j) * b[j];
  }
  return acc;
}

}  // namespace

TEST_CASE("family matrix entries") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  CHECK(u.at(0, 2) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(u.at(0, 3) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(u.at(3, 0) == doctest::Approx(-0.2).epsilon(1e-15));
  CHECK(u.at(3, 3) == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(u.at(i, i) == 0.0);

  const GameMatrix g0 = build_rps4(RPS4Params::g0(0.1));
  for (int j = 0; j < 3; ++j) CHECK(g0.at(3, j) == doctest::Approx(-0.3).epsilon(1e-15));
  CHECK(g0.at(3, 3) == 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(RPS4Params::valid(0.9, 0.04), ValidationError);  // 0.04 >= (1-0.9)/3
  CHECK_THROWS_AS(RPS4Params::valid(0.1, 0.0), ValidationError);
  CHECK_THROWS_AS(RPS4Params::valid(1.0, 0.1), ValidationError);
  CHECK_THROWS_AS(RPS4Params::valid(0.0, 0.1), ValidationError);
  CHECK_THROWS_AS(RPS4Params::g0(1.5), ValidationError);
  CHECK_NOTHROW(RPS4Params::unchecked(0.1, 0.35));
  CHECK_THROWS_AS(RPS4Params::unchecked(0.1, -0.1), ValidationError);
}

TEST_CASE("cyclic margins are positive across the valid range") {
  for (double eps : {0.05, 0.1, 0.3, 0.5, 0.9}) {
    const double cap = (1.0 - eps) / 3.0;
    for (double frac : {0.1, 0.5, 0.9}) {
      const GameMatrix u = build_rps4(RPS4Params::valid(eps, cap * frac));
      for (int i = 0; i < 3; ++i) {
        const int prev = (i + 2) % 3;
        const int next = (i + 1) % 3;
        CHECK(u.at(next, i) - u.at(i, i) > 0.0);  // beta_i
        CHECK(u.at(i, i) - u.at(prev, i) > 0.0);  // alpha_i
      }
    }
  }
}

TEST_CASE("safe strategy strictly beats the cyclic mix when alpha > 0") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const std::vector<double> mix = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0};
  SplitMix64 rng(42);
  for (int k = 0; k < 1000; ++k) {
    const auto x = simplex_sample(rng, 4);
    const auto p = payoff_vector(u, x);
    double mix_payoff = 0.0;
    for (int i = 0; i < 4; ++i) mix_payoff += mix[i] * p[i];
    CHECK(p[3] - mix_payoff > 0.0);
  }
}

TEST_CASE("perturbation") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.2, 0.1));
  const GameMatrix dir(4, std::vector<double>(16, 0.4));
  const GameMatrix same = perturb(u, dir, 0.0);
  CHECK(same.entries() == u.entries());

  const GameMatrix ones(4, std::vector<double>(16, 1.0));
  const GameMatrix shifted = perturb(u, ones, 1e-3);
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK(shifted.entries()[k] == doctest::Approx(u.entries()[k] + 1e-3).epsilon(1e-14));
  }

  CHECK_THROWS_AS(perturb(u, GameMatrix(2, {0, 0, 0, 0}), 0.1), ValidationError);
  CHECK_THROWS_AS(perturb(u, GameMatrix(4, std::vector<double>(16, 1.5)), 0.1), ValidationError);
  CHECK_THROWS_AS(perturb(u, ones, -1.0), ValidationError);
}

TEST_CASE("mixed strategy construction") {
  const MixedStrategy ok({0.25, 0.25, 0.25, 0.25});
  CHECK_FALSE(ok.renormalized());

  const MixedStrategy clamped({0.5, 0.5 + 5e-10, -5e-10, 0.0});
  CHECK(clamped.renormalized());
  CHECK(clamped[2] == 0.0);
  double total = 0.0;
  for (int i = 0; i < 4; ++i) total += clamped[i];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(MixedStrategy({0.5, 0.5, -2e-9, 0.0}), ValidationError);
  CHECK_THROWS_AS(MixedStrategy({0.5, 0.5, 1e-8, 0.0}), ValidationError);
  CHECK_THROWS_AS(MixedStrategy(std::vector<double>{}), ValidationError);
}

TEST_CASE("extension payoffs") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));

  const ExtendedGame trivial = extend_with_mixed(u, {});
  CHECK(trivial.uext.size() == 4);
  CHECK(trivial.uext.entries() == u.entries());

  const MixedStrategy mix({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0});
  const ExtendedGame g = extend_with_mixed(u, {mix});
  CHECK(g.uext.size() == 5);
  CHECK(g.uext.at(4, 4) ==
        doctest::Approx(slow_bilinear(u, mix.weights(), mix.weights())).epsilon(1e-15));
  CHECK(g.uext.at(4, 4) == doctest::Approx(-0.3).epsilon(1e-12));
  // Base entries survive untouched.
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(g.uext.at(i, j) == u.at(i, j));
  }

  const ExtendedGame dup = extend_with_mixed(u, {MixedStrategy::vertex(4, 3)});
  for (int j = 0; j < 5; ++j) {
    CHECK(dup.uext.at(4, j) == dup.uext.at(3, j));
    CHECK(dup.uext.at(j, 4) == dup.uext.at(j, 3));
  }

  CHECK_THROWS_AS(extend_with_mixed(u, {MixedStrategy({0.5, 0.5})}), ValidationError);
}

TEST_CASE("induced strategies") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const MixedStrategy mix({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0});
  const ExtendedGame g = extend_with_mixed(u, {mix});

  const MixedStrategy unit = induce_strategy(g, MixedStrategy::vertex(5, 4));
  for (int i = 0; i < 4; ++i) CHECK(unit[i] == doctest::Approx(mix[i]).epsilon(1e-15));

  const ExtendedGame g2 = extend_with_mixed(u, {MixedStrategy::vertex(4, 3)});
  const MixedStrategy spread = induce_strategy(g2, MixedStrategy({0.2, 0.2, 0.2, 0.2, 0.2}));
  CHECK(spread[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(spread[3] == doctest::Approx(0.4).epsilon(1e-15));

  // Mass on the base coordinates passes through unchanged.
  const MixedStrategy base_only = induce_strategy(g, MixedStrategy({0.4, 0.3, 0.2, 0.1, 0.0}));
  CHECK(base_only[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(base_only[3] == doctest::Approx(0.1).epsilon(1e-15));

  CHECK_THROWS_AS(induce_strategy(g, MixedStrategy({0.5, 0.5, 0.0, 0.0})), ValidationError);
}

TEST_CASE("induced distributions") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const MixedStrategy half({0.5, 0.5, 0.0, 0.0});
  const ExtendedGame g = extend_with_mixed(u, {half});

  const JointDistribution pure4 = induce_distribution(
      g, JointDistribution::product(MixedStrategy::vertex(5, 3), MixedStrategy::vertex(5, 3)));
  CHECK(pure4.at(3, 3) == doctest::Approx(1.0).epsilon(1e-15));

  const JointDistribution quarters = induce_distribution(
      g, JointDistribution::product(MixedStrategy::vertex(5, 4), MixedStrategy::vertex(5, 4)));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) CHECK(quarters.at(i, j) == doctest::Approx(0.25).epsilon(1e-15));
  }
  CHECK(quarters.at(2, 2) == 0.0);

  SplitMix64 rng(7);
  for (int k = 0; k < 20; ++k) {
    const JointDistribution muprime(5, simplex_sample(rng, 25));
    const JointDistribution mu = induce_distribution(g, muprime);
    double mass = 0.0;
    for (double v : mu.entries()) mass += v;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("induction commutes with product distributions") {
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const ExtendedGame g = extend_with_mixed(
      u, {MixedStrategy({0.25, 0.25, 0.25, 0.25}), MixedStrategy({0.0, 0.0, 0.5, 0.5})});
  SplitMix64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const MixedStrategy xprime(simplex_sample(rng, 6));
    const JointDistribution lhs =
        induce_distribution(g, JointDistribution::product(xprime, xprime));
    const MixedStrategy x = induce_strategy(g, xprime);
    const JointDistribution rhs = JointDistribution::product(x, x);
    for (std::size_t idx = 0; idx < lhs.entries().size(); ++idx) {
      CHECK(lhs.entries()[idx] == doctest::Approx(rhs.entries()[idx]).epsilon(1e-12));
    }
  }
}

TEST_CASE("payoff helpers agree with the longhand form") {
  SplitMix64 rng(3);
  const GameMatrix u = build_rps4(RPS4Params::valid(0.3, 0.05));
  for (int k = 0; k < 100; ++k) {
    const auto a = simplex_sample(rng, 4);
    const auto b = simplex_sample(rng, 4);
    CHECK(bilinear(u, a, b) == doctest::Approx(slow_bilinear(u, a, b)).epsilon(1e-14));
    CHECK(average_payoff(u, a) == doctest::Approx(slow_bilinear(u, a, a)).epsilon(1e-14));
  }
}
