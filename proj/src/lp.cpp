#include "evoelim/lp.hpp"

#include <cmath>
#include <cstddef>

namespace evoelim {

namespace {

constexpr double kPivotEps = 1e-7;        // minimal acceptable pivot magnitude
constexpr double kReducedCostEps = 1e-9;  // optimality threshold
constexpr long long kMaxPivots = 1'000'000;

struct Tableau {
  // rows x (cols + 1); last column is the RHS.
  int m = 0;
  int n = 0;
  std::vector<double> a;
  std::vector<int> basis;  // basis[r] = column basic in row r

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * (n + 1) + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * (n + 1) + c]; }

  void pivot(int r, int c) {
    const double inv = 1.0 / at(r, c);
    for (int j = 0; j <= n; ++j) at(r, j) *= inv;
    at(r, c) = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const double factor = at(i, c);
      if (factor == 0.0) continue;
      for (int j = 0; j <= n; ++j) at(i, j) -= factor * at(r, j);
      at(i, c) = 0.0;
    }
    basis[static_cast<std::size_t>(r)] = c;
  }
};

enum class SimplexResult { Optimal, Unbounded, Stalled };

// Reduced costs of `objective` (a full column-cost vector) under the current
// basis, computed from scratch. Incremental updates drift on long degenerate
// runs, so phases re-price and re-enter until genuinely optimal.
std::vector<double> price(const Tableau& t, const std::vector<double>& objective) {
  std::vector<double> cost(static_cast<std::size_t>(t.n) + 1, 0.0);
  for (int j = 0; j < t.n; ++j) cost[static_cast<std::size_t>(j)] = objective[static_cast<std::size_t>(j)];
  for (int i = 0; i < t.m; ++i) {
    const double cb = objective[static_cast<std::size_t>(t.basis[static_cast<std::size_t>(i)])];
    if (cb == 0.0) continue;
    for (int j = 0; j <= t.n; ++j) cost[static_cast<std::size_t>(j)] -= cb * t.at(i, j);
  }
  return cost;
}

// Rebuilds the tableau from pristine data under the current basis, with
// partial pivoting. Long degenerate pivot sequences can degrade the running
// tableau beyond what any tolerance survives; reinversion resets that damage.
// Returns false when the basis matrix is numerically singular.
bool reinvert(Tableau& t, const Tableau& pristine) {
  const int m = t.m;
  const int n = t.n;
  Tableau work = pristine;
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  std::vector<int> row_of(static_cast<std::size_t>(m), -1);
  for (int r = 0; r < m; ++r) {
    const int c = t.basis[static_cast<std::size_t>(r)];
    int pick = -1;
    double mag = 1e-11;
    for (int i = 0; i < m; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      if (std::fabs(work.at(i, c)) > mag) {
        mag = std::fabs(work.at(i, c));
        pick = i;
      }
    }
    if (pick < 0) return false;
    const double inv = 1.0 / work.at(pick, c);
    for (int j = 0; j <= n; ++j) work.at(pick, j) *= inv;
    work.at(pick, c) = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == pick) continue;
      const double f = work.at(i, c);
      if (f == 0.0) continue;
      for (int j = 0; j <= n; ++j) work.at(i, j) -= f * work.at(pick, j);
      work.at(i, c) = 0.0;
    }
    used[static_cast<std::size_t>(pick)] = 1;
    row_of[static_cast<std::size_t>(r)] = pick;
  }
  Tableau out = t;
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j <= n; ++j) out.at(r, j) = work.at(row_of[static_cast<std::size_t>(r)], j);
  }
  t = std::move(out);
  return true;
}

// One sweep to claimed optimality. Entering: most negative reduced cost, ties
// to the lowest index; a degeneracy watchdog switches to pure Bland (lowest
// eligible index) whose termination guarantee breaks cycles, reverting when
// the objective moves again. Leaving: banded ratio test so that rounding
// noise in nearly-degenerate rhs values cannot hand the pivot to a
// near-singular element; the largest in-band pivot wins.
SimplexResult simplex_pass(Tableau& t, const std::vector<double>& objective,
                           const std::vector<bool>& banned, long long& pivots_left) {
  std::vector<double> cost = price(t, objective);
  int stalled_pivots = 0;
  bool bland_mode = false;
  for (;;) {
    int entering = -1;
    if (bland_mode) {
      for (int j = 0; j < t.n; ++j) {
        if (banned[static_cast<std::size_t>(j)]) continue;
        if (cost[static_cast<std::size_t>(j)] < -kReducedCostEps) {
          entering = j;
          break;
        }
      }
    } else {
      double most = -kReducedCostEps;
      for (int j = 0; j < t.n; ++j) {
        if (banned[static_cast<std::size_t>(j)]) continue;
        if (cost[static_cast<std::size_t>(j)] < most) {
          most = cost[static_cast<std::size_t>(j)];
          entering = j;
        }
      }
    }
    if (entering < 0) return SimplexResult::Optimal;

    double best_ratio = -1.0;
    for (int i = 0; i < t.m; ++i) {
      const double coef = t.at(i, entering);
      if (coef <= kPivotEps) continue;
      const double ratio = std::max(t.at(i, t.n), 0.0) / coef;
      if (best_ratio < 0.0 || ratio < best_ratio) best_ratio = ratio;
    }
    if (best_ratio < 0.0) return SimplexResult::Unbounded;

    const double band = 1e-9 * (1.0 + best_ratio);
    int leaving = -1;
    double best_coef = 0.0;
    for (int i = 0; i < t.m; ++i) {
      const double coef = t.at(i, entering);
      if (coef <= kPivotEps) continue;
      const double ratio = std::max(t.at(i, t.n), 0.0) / coef;
      if (ratio > best_ratio + band) continue;
      bool better = false;
      if (leaving < 0) {
        better = true;
      } else if (bland_mode) {
        better = t.basis[static_cast<std::size_t>(i)] <
                 t.basis[static_cast<std::size_t>(leaving)];
      } else if (coef > best_coef) {
        better = true;
      } else if (coef == best_coef && t.basis[static_cast<std::size_t>(i)] <
                                          t.basis[static_cast<std::size_t>(leaving)]) {
        better = true;
      }
      if (better) {
        leaving = i;
        best_coef = coef;
      }
    }
    if (--pivots_left < 0) return SimplexResult::Stalled;

    const double before = cost[static_cast<std::size_t>(t.n)];
    const double entering_cost = cost[static_cast<std::size_t>(entering)];
    t.pivot(leaving, entering);
    for (int j = 0; j <= t.n; ++j) {
      cost[static_cast<std::size_t>(j)] -= entering_cost * t.at(leaving, j);
    }
    cost[static_cast<std::size_t>(entering)] = 0.0;

    if (std::fabs(cost[static_cast<std::size_t>(t.n)] - before) > 1e-12) {
      stalled_pivots = 0;
      bland_mode = false;
    } else if (++stalled_pivots > 50) {
      bland_mode = true;
    }
  }
}

// Pass / reinvert / re-price until a cleanly rebuilt tableau confirms
// optimality.
SimplexResult run_simplex(Tableau& t, const Tableau& pristine,
                          const std::vector<double>& objective, const std::vector<bool>& banned,
                          long long& pivots_left) {
  for (int round = 0; round < 16; ++round) {
    const SimplexResult res = simplex_pass(t, objective, banned, pivots_left);
    if (res != SimplexResult::Optimal) return res;
    if (!reinvert(t, pristine)) return SimplexResult::Stalled;
    const auto cost = price(t, objective);
    bool clean = true;
    for (int j = 0; j < t.n && clean; ++j) {
      if (banned[static_cast<std::size_t>(j)]) continue;
      clean = cost[static_cast<std::size_t>(j)] >= -kReducedCostEps;
    }
    if (clean) return SimplexResult::Optimal;
  }
  return SimplexResult::Stalled;
}

}  // namespace

LPOutcome solve(const LinearProgram& lp) {
  const int nvars = lp.num_vars();
  if (nvars == 0) throw ValidationError("LP has no variables");
  if (static_cast<int>(lp.lower.size()) != nvars || static_cast<int>(lp.upper.size()) != nvars) {
    throw ValidationError("LP bound arrays must match the number of variables");
  }
  for (double c : lp.objective) {
    if (!std::isfinite(c)) throw ValidationError("LP objective must be finite");
  }
  for (const auto& row : lp.rows) {
    if (static_cast<int>(row.coeffs.size()) != nvars) {
      throw ValidationError("LP row width differs from objective length");
    }
    if (!std::isfinite(row.rhs)) throw ValidationError("LP rhs must be finite");
    for (double c : row.coeffs) {
      if (!std::isfinite(c)) throw ValidationError("LP coefficients must be finite");
    }
  }

  // Internal form: minimize c.y over equality rows, y >= 0. Finite lower
  // bounds are shifted away, free variables split, upper bounds become rows.
  struct VarMap {
    int pos = -1;
    int neg = -1;  // set for free variables only
    double shift = 0.0;
  };
  std::vector<VarMap> vmap(static_cast<std::size_t>(nvars));
  int cols = 0;
  for (int j = 0; j < nvars; ++j) {
    const double lb = lp.lower[static_cast<std::size_t>(j)];
    if (std::isfinite(lb)) {
      vmap[static_cast<std::size_t>(j)] = VarMap{cols++, -1, lb};
    } else {
      vmap[static_cast<std::size_t>(j)].pos = cols++;
      vmap[static_cast<std::size_t>(j)].neg = cols++;
    }
  }
  const int structural_cols = cols;

  struct NormRow {
    std::vector<double> coeffs;
    RowSense sense;
    double rhs;
  };
  std::vector<NormRow> norm_rows;
  auto project_row = [&](const std::vector<double>& coeffs, RowSense sense, double rhs) {
    NormRow nr;
    nr.coeffs.assign(static_cast<std::size_t>(structural_cols), 0.0);
    nr.sense = sense;
    nr.rhs = rhs;
    for (int j = 0; j < nvars; ++j) {
      const double c = coeffs[static_cast<std::size_t>(j)];
      if (c == 0.0) continue;
      const auto& vm = vmap[static_cast<std::size_t>(j)];
      nr.coeffs[static_cast<std::size_t>(vm.pos)] += c;
      if (vm.neg >= 0) nr.coeffs[static_cast<std::size_t>(vm.neg)] -= c;
      nr.rhs -= c * vm.shift;
    }
    // Sign-normalize to rhs >= 0, then prefer slack-startable rows: a
    // GreaterEqual row with rhs 0 is just a flipped LessEqual row.
    if (nr.rhs < 0.0) {
      nr.rhs = -nr.rhs;
      for (auto& c : nr.coeffs) c = -c;
      if (nr.sense == RowSense::LessEqual) nr.sense = RowSense::GreaterEqual;
      else if (nr.sense == RowSense::GreaterEqual) nr.sense = RowSense::LessEqual;
    }
    if (nr.sense == RowSense::GreaterEqual && nr.rhs == 0.0) {
      for (auto& c : nr.coeffs) c = -c;
      nr.sense = RowSense::LessEqual;
    }
    norm_rows.push_back(std::move(nr));
  };
  for (const auto& row : lp.rows) project_row(row.coeffs, row.sense, row.rhs);
  for (int j = 0; j < nvars; ++j) {
    const double ub = lp.upper[static_cast<std::size_t>(j)];
    if (!std::isfinite(ub)) continue;
    if (!std::isfinite(lp.lower[static_cast<std::size_t>(j)])) {
      throw ValidationError("upper bound on a free variable is not supported");
    }
    std::vector<double> unit(static_cast<std::size_t>(nvars), 0.0);
    unit[static_cast<std::size_t>(j)] = 1.0;
    project_row(unit, RowSense::LessEqual, ub);
  }

  const int m = static_cast<int>(norm_rows.size());
  if (m == 0) throw ValidationError("LP must have at least one constraint row");

  int slack_count = 0;
  for (const auto& nr : norm_rows) {
    if (nr.sense != RowSense::Equal) ++slack_count;
  }

  Tableau t;
  t.m = m;
  const int max_cols = structural_cols + slack_count + m;
  t.n = max_cols;
  t.a.assign(static_cast<std::size_t>(t.m) * (max_cols + 1), 0.0);
  t.basis.assign(static_cast<std::size_t>(t.m), -1);

  std::vector<bool> is_artificial(static_cast<std::size_t>(max_cols), false);
  int next_col = structural_cols;
  int artificial_count = 0;
  for (int i = 0; i < m; ++i) {
    const auto& nr = norm_rows[static_cast<std::size_t>(i)];
    for (int j = 0; j < structural_cols; ++j) t.at(i, j) = nr.coeffs[static_cast<std::size_t>(j)];
    t.at(i, max_cols) = nr.rhs;
    if (nr.sense == RowSense::LessEqual) {
      t.at(i, next_col) = 1.0;
      t.basis[static_cast<std::size_t>(i)] = next_col;
      ++next_col;
    } else if (nr.sense == RowSense::GreaterEqual) {
      t.at(i, next_col) = -1.0;  // surplus; cannot start basic
      ++next_col;
    }
    if (t.basis[static_cast<std::size_t>(i)] < 0) {
      t.at(i, next_col) = 1.0;
      is_artificial[static_cast<std::size_t>(next_col)] = true;
      t.basis[static_cast<std::size_t>(i)] = next_col;
      ++next_col;
      ++artificial_count;
    }
  }
  // Pack out the unused artificial columns.
  if (next_col != max_cols) {
    Tableau packed;
    packed.m = t.m;
    packed.n = next_col;
    packed.a.assign(static_cast<std::size_t>(packed.m) * (next_col + 1), 0.0);
    packed.basis = t.basis;
    for (int i = 0; i < t.m; ++i) {
      for (int j = 0; j < next_col; ++j) {
        packed.a[static_cast<std::size_t>(i) * (next_col + 1) + j] =
            t.a[static_cast<std::size_t>(i) * (max_cols + 1) + j];
      }
      packed.a[static_cast<std::size_t>(i) * (next_col + 1) + next_col] =
          t.a[static_cast<std::size_t>(i) * (max_cols + 1) + max_cols];
    }
    t = std::move(packed);
  }
  is_artificial.resize(static_cast<std::size_t>(t.n));

  const Tableau pristine = t;
  long long pivots_left = kMaxPivots;
  std::vector<bool> no_ban(static_cast<std::size_t>(t.n), false);

  if (artificial_count > 0) {
    std::vector<double> phase1(static_cast<std::size_t>(t.n), 0.0);
    for (int j = 0; j < t.n; ++j) {
      if (is_artificial[static_cast<std::size_t>(j)]) phase1[static_cast<std::size_t>(j)] = 1.0;
    }
    const SimplexResult res = run_simplex(t, pristine, phase1, no_ban, pivots_left);
    if (res == SimplexResult::Stalled) return LPOutcome{LPStatus::Stalled, {}, 0.0};
    double infeasibility = 0.0;
    for (int i = 0; i < t.m; ++i) {
      if (is_artificial[static_cast<std::size_t>(t.basis[static_cast<std::size_t>(i)])]) {
        infeasibility += std::max(t.at(i, t.n), 0.0);
      }
    }
    if (res == SimplexResult::Unbounded || infeasibility > kLpTol) {
      return LPOutcome{LPStatus::Infeasible, {}, 0.0};
    }
    // Drive leftover artificials out of the basis where possible.
    for (int i = 0; i < t.m; ++i) {
      const int b = t.basis[static_cast<std::size_t>(i)];
      if (!is_artificial[static_cast<std::size_t>(b)]) continue;
      int col = -1;
      for (int j = 0; j < t.n; ++j) {
        if (is_artificial[static_cast<std::size_t>(j)]) continue;
        if (std::fabs(t.at(i, j)) > kPivotEps) {
          col = j;
          break;
        }
      }
      if (col >= 0) t.pivot(i, col);
      // else: redundant row; the artificial stays basic at value ~0.
    }
  }

  const double obj_sign = (lp.direction == LPDirection::Maximize) ? -1.0 : 1.0;
  std::vector<double> phase2(static_cast<std::size_t>(t.n), 0.0);
  for (int j = 0; j < nvars; ++j) {
    const double c = obj_sign * lp.objective[static_cast<std::size_t>(j)];
    if (c == 0.0) continue;
    const auto& vm = vmap[static_cast<std::size_t>(j)];
    phase2[static_cast<std::size_t>(vm.pos)] += c;
    if (vm.neg >= 0) phase2[static_cast<std::size_t>(vm.neg)] -= c;
  }
  const SimplexResult res = run_simplex(t, pristine, phase2, is_artificial, pivots_left);
  if (res == SimplexResult::Stalled) return LPOutcome{LPStatus::Stalled, {}, 0.0};
  if (res == SimplexResult::Unbounded) return LPOutcome{LPStatus::Unbounded, {}, 0.0};

  std::vector<double> y(static_cast<std::size_t>(t.n), 0.0);
  for (int i = 0; i < t.m; ++i) {
    y[static_cast<std::size_t>(t.basis[static_cast<std::size_t>(i)])] = t.at(i, t.n);
  }
  LPOutcome out;
  out.status = LPStatus::Optimal;
  out.x.assign(static_cast<std::size_t>(nvars), 0.0);
  for (int j = 0; j < nvars; ++j) {
    const auto& vm = vmap[static_cast<std::size_t>(j)];
    double v = y[static_cast<std::size_t>(vm.pos)];
    if (vm.neg >= 0) v -= y[static_cast<std::size_t>(vm.neg)];
    out.x[static_cast<std::size_t>(j)] = v + vm.shift;
  }
  double value = 0.0;
  for (int j = 0; j < nvars; ++j) {
    value += lp.objective[static_cast<std::size_t>(j)] * out.x[static_cast<std::size_t>(j)];
  }
  out.value = value;
  return out;
}

}  // namespace evoelim
