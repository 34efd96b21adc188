#pragma once

#include <vector>

#include "evoelim/game.hpp"
#include "evoelim/lp.hpp"

namespace evoelim {

// Linear description of the correlated-equilibrium polytope of a symmetric
// game: incentive rows for both players (2*N*(N-1) of them), nonnegativity
// (as variable bounds), and the normalization row. Variables are the joint
// probabilities mu(i, j) flattened row-major.
struct CESystem {
  GameMatrix game;
  std::vector<LinearProgram::Row> incentive_rows;

  int flat_index(int i, int j) const { return i * game.size() + j; }
  int num_vars() const { return game.size() * game.size(); }

  // Assembles the full LP for a given objective over mu.
  LinearProgram program(std::vector<double> objective, LPDirection direction) const;
  // Worst incentive/normalization violation of a candidate distribution.
  double max_violation(const JointDistribution& mu) const;
};

CESystem ce_polytope(const GameMatrix& u);

// Entry (i, j) = max mu(i, j) over the CE polytope, one LP per coordinate.
std::vector<std::vector<double>> ce_mass_bounds(const GameMatrix& u);
// Coordinate minima; together with the maxima these certify uniqueness.
std::vector<std::vector<double>> ce_mass_lower_bounds(const GameMatrix& u);

// 0-based indices of strategies whose maximal symmetrized marginal mass over
// the CE polytope exceeds tol.
std::vector<int> strategies_used_in_ce(const GameMatrix& u, double tol = 1e-7);

// Uniqueness probe: 2 N^2 coordinate LPs (max and min per cell). Returns the
// worst deviation of any coordinate bound from the candidate distribution;
// a gap near zero certifies that the polytope is the single point.
double ce_uniqueness_gap(const GameMatrix& u, const JointDistribution& candidate);

struct NashReport {
  double residual = 0.0;  // max_i (Ux)_i - x.Ux; <= 0 iff (x, x) is Nash
  bool strict = false;    // x is a vertex and every other reply is strictly worse
};

NashReport nash_report(const GameMatrix& u, const MixedStrategy& x);

}  // namespace evoelim
