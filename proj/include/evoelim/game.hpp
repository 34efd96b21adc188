#pragma once

#include <optional>
#include <vector>

#include "evoelim/common.hpp"

namespace evoelim {

// Construction tolerance for simplex-valued inputs. Inputs within this
// tolerance are clamped/renormalized (with a warning flag); inputs beyond it
// are rejected. Keeps integrator drift from poisoning downstream constructors.
inline constexpr double kSimplexTol = 1e-9;

// Parameters of the 4x4 rock-paper-scissors-plus-safe-strategy family.
struct RPS4Params {
  double epsilon = 0.0;
  double alpha = 0.0;

  // Requires 0 < epsilon < 1 and 0 < alpha < (1 - epsilon) / 3.
  static RPS4Params valid(double epsilon, double alpha);
  // The alpha = 0 member of the family.
  static RPS4Params g0(double epsilon);
  // Keeps the epsilon range check but allows any alpha >= 0;
  // for probing parameter values outside the stable regime.
  static RPS4Params unchecked(double epsilon, double alpha);
};

// Payoff matrix of a symmetric two-player game. u(i, j) is the payoff of the
// row strategy i against j. Indices are 0-based in code, 1-based in all
// serialized output and error messages.
class GameMatrix {
 public:
  GameMatrix() = default;
  GameMatrix(int n, std::vector<double> row_major);

  int size() const { return n_; }
  double at(int i, int j) const { return u_[static_cast<std::size_t>(i) * n_ + j]; }
  double& at(int i, int j) { return u_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& entries() const { return u_; }

 private:
  int n_ = 0;
  std::vector<double> u_;
};

// Point of the simplex S_N. Constructor clamps small negatives to zero and
// rescales; renormalized() reports whether any adjustment happened.
class MixedStrategy {
 public:
  explicit MixedStrategy(std::vector<double> weights);
  static MixedStrategy vertex(int n, int i);

  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& weights() const { return w_; }
  bool renormalized() const { return renormalized_; }

 private:
  std::vector<double> w_;
  bool renormalized_ = false;
};

// Probability distribution on I x I (joint play of the two players).
class JointDistribution {
 public:
  explicit JointDistribution(int n, std::vector<double> row_major);
  static JointDistribution product(const MixedStrategy& x, const MixedStrategy& y);

  int size() const { return n_; }
  double at(int i, int j) const { return m_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& entries() const { return m_; }
  bool renormalized() const { return renormalized_; }

 private:
  int n_ = 0;
  std::vector<double> m_;
  bool renormalized_ = false;
};

// Game built on a base game by adding mixed strategies as new pure
// strategies. strategies[k] is the base-game mixed strategy played by type k;
// the first N of them are the base vertices.
struct ExtendedGame {
  GameMatrix base;
  std::vector<MixedStrategy> strategies;
  GameMatrix uext;
};

GameMatrix build_rps4(const RPS4Params& params);

// u + rho * delta entrywise. Requires same shape, max |delta| <= 1, rho >= 0.
GameMatrix perturb(const GameMatrix& u, const GameMatrix& delta, double rho);

ExtendedGame extend_with_mixed(const GameMatrix& u, const std::vector<MixedStrategy>& extras);

// x = sum_k x'_k p^k: the base-game mixed strategy induced by a profile of
// the extended game.
MixedStrategy induce_strategy(const ExtendedGame& g, const MixedStrategy& xprime);

// mu(i,j) = sum_{k,l} mu'(k,l) p^k_i p^l_j.
JointDistribution induce_distribution(const ExtendedGame& g, const JointDistribution& muprime);

// Payoff arithmetic. Raw-vector variants exist for integrator hot loops.
std::vector<double> payoff_vector(const GameMatrix& u, const std::vector<double>& x);
inline std::vector<double> payoff_vector(const GameMatrix& u, const MixedStrategy& x) {
  return payoff_vector(u, x.weights());
}
double average_payoff(const GameMatrix& u, const std::vector<double>& x);
inline double average_payoff(const GameMatrix& u, const MixedStrategy& x) {
  return average_payoff(u, x.weights());
}
// a . U b
double bilinear(const GameMatrix& u, const std::vector<double>& a, const std::vector<double>& b);

}  // namespace evoelim
