#pragma once

#include <string>
#include <vector>

#include "evoelim/game.hpp"

namespace evoelim {

// Transformation applied to excess payoffs in the generalized
// excess-payoff dynamics. Fixed catalog so property suites can enumerate it.
struct FCatalog {
  enum class Tag { Identity, Power, Sqrt };
  Tag tag = Tag::Identity;
  double p = 2.0;  // exponent for Power, must be >= 1

  static FCatalog identity() { return FCatalog{Tag::Identity, 1.0}; }
  static FCatalog power(double exponent);
  static FCatalog sqrt() { return FCatalog{Tag::Sqrt, 0.5}; }

  double operator()(double k) const;
  // Antiderivative with F(0) = 0; the potential monitored along trajectories.
  double antiderivative(double k) const;
  std::string name() const;
};

struct DynamicsSpec {
  enum class Kind { Replicator, BNN, MonotonicExp, BestResponse };
  Kind kind = Kind::Replicator;
  FCatalog f = FCatalog::identity();  // BNN family only
  double lambda = 1.0;                // MonotonicExp only, > 0

  static DynamicsSpec replicator() { return DynamicsSpec{Kind::Replicator, FCatalog::identity(), 1.0}; }
  static DynamicsSpec bnn(FCatalog f = FCatalog::identity());
  static DynamicsSpec monotonic_exp(double lambda = 1.0);
  static DynamicsSpec best_response() {
    return DynamicsSpec{Kind::BestResponse, FCatalog::identity(), 1.0};
  }

  std::string name() const;
};

// k_i = positive part of the payoff of i over the population average,
// kbar their sum, q = k / kbar (empty convention: q untouched when kbar = 0).
struct ExcessPayoffs {
  std::vector<double> k;
  double kbar = 0.0;
  std::vector<double> q;
};

ExcessPayoffs excess_payoffs(const GameMatrix& u, const std::vector<double>& x);
inline ExcessPayoffs excess_payoffs(const GameMatrix& u, const MixedStrategy& x) {
  return excess_payoffs(u, x.weights());
}

// Velocity of the selected dynamics at x. BestResponse is set-valued and is
// rejected here; use integrate_br.
std::vector<double> field(const DynamicsSpec& spec, const GameMatrix& u, const MixedStrategy& x);
std::vector<double> field_raw(const DynamicsSpec& spec, const GameMatrix& u,
                              const std::vector<double>& x);

// Per-capita growth rates g_i with velocity_i = x_i * g_i, defined for every
// strategy including extinct ones. Only Replicator and MonotonicExp have
// growth rates; the excess-payoff dynamics are innovative and do not.
std::vector<double> growth_rates(const DynamicsSpec& spec, const GameMatrix& u,
                                 const MixedStrategy& x);
std::vector<double> growth_rates_raw(const DynamicsSpec& spec, const GameMatrix& u,
                                     const std::vector<double>& x);

// Pure strategies within tol of the maximal payoff against x. 0-based.
std::vector<int> best_responses(const GameMatrix& u, const MixedStrategy& x, double tol = 1e-10);
std::vector<int> best_responses_raw(const GameMatrix& u, const std::vector<double>& x,
                                    double tol = 1e-10);

}  // namespace evoelim
