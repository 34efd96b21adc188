#pragma once

#include <limits>
#include <vector>

#include "evoelim/common.hpp"

namespace evoelim {

inline constexpr double kLpTol = 1e-8;

enum class RowSense { LessEqual, Equal, GreaterEqual };
enum class LPDirection { Maximize, Minimize };
enum class LPStatus { Optimal, Infeasible, Unbounded, Stalled };

// Dense LP in the form
//   opt  c . x
//   s.t. row_k . x  (<= | = | >=)  rhs_k
//        lower_j <= x_j <= upper_j
// Lower bounds default to 0; -infinity marks a free variable. Upper bounds
// default to +infinity.
struct LinearProgram {
  struct Row {
    std::vector<double> coeffs;
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;
  };

  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<double> lower;  // resized to objective size at solve time
  std::vector<double> upper;
  LPDirection direction = LPDirection::Maximize;

  explicit LinearProgram(int num_vars = 0)
      : objective(static_cast<std::size_t>(num_vars), 0.0),
        lower(static_cast<std::size_t>(num_vars), 0.0),
        upper(static_cast<std::size_t>(num_vars), std::numeric_limits<double>::infinity()) {}

  int num_vars() const { return static_cast<int>(objective.size()); }

  void add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
    rows.push_back(Row{std::move(coeffs), sense, rhs});
  }

  void set_free(int j) { lower[static_cast<std::size_t>(j)] = -std::numeric_limits<double>::infinity(); }
};

struct LPOutcome {
  LPStatus status = LPStatus::Infeasible;
  std::vector<double> x;  // meaningful only when Optimal
  double value = 0.0;
};

// Two-phase dense tableau simplex, Bland's rule throughout (termination over
// speed; the problems here have at most a few dozen variables). Deterministic
// for identical input. Throws ValidationError on NaN/Inf input or shape
// mismatch; returns Stalled after 10^6 pivots.
LPOutcome solve(const LinearProgram& lp);

}  // namespace evoelim
