#include "evoelim/equilibria.hpp"

#include <algorithm>
#include <cmath>

namespace evoelim {

CESystem ce_polytope(const GameMatrix& u) {
  const int n = u.size();
  CESystem sys{u, {}};
  sys.incentive_rows.reserve(static_cast<std::size_t>(2 * n * (n - 1)));
  // Row player: if told to play i, deviating to j must not pay:
  //   sum_l mu(i, l) (u[i][l] - u[j][l]) >= 0.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      LinearProgram::Row row;
      row.coeffs.assign(static_cast<std::size_t>(n) * n, 0.0);
      for (int l = 0; l < n; ++l) {
        row.coeffs[static_cast<std::size_t>(sys.flat_index(i, l))] = u.at(i, l) - u.at(j, l);
      }
      row.sense = RowSense::GreaterEqual;
      row.rhs = 0.0;
      sys.incentive_rows.push_back(std::move(row));
    }
  }
  // Column player of the symmetric game: its payoff at profile (l, i) is
  // u[i][l], so the analogue runs over the column marginals.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      LinearProgram::Row row;
      row.coeffs.assign(static_cast<std::size_t>(n) * n, 0.0);
      for (int l = 0; l < n; ++l) {
        row.coeffs[static_cast<std::size_t>(sys.flat_index(l, i))] = u.at(i, l) - u.at(j, l);
      }
      row.sense = RowSense::GreaterEqual;
      row.rhs = 0.0;
      sys.incentive_rows.push_back(std::move(row));
    }
  }
  return sys;
}

LinearProgram CESystem::program(std::vector<double> objective, LPDirection direction) const {
  const int nv = num_vars();
  if (static_cast<int>(objective.size()) != nv) {
    throw ValidationError("CE objective must have n^2 entries");
  }
  LinearProgram lp(nv);
  lp.objective = std::move(objective);
  lp.direction = direction;
  lp.rows = incentive_rows;
  lp.add_row(std::vector<double>(static_cast<std::size_t>(nv), 1.0), RowSense::Equal, 1.0);
  return lp;
}

double CESystem::max_violation(const JointDistribution& mu) const {
  if (mu.size() != game.size()) throw ValidationError("distribution size mismatch");
  double worst = 0.0;
  for (const auto& row : incentive_rows) {
    double acc = 0.0;
    for (std::size_t k = 0; k < row.coeffs.size(); ++k) acc += row.coeffs[k] * mu.entries()[k];
    worst = std::max(worst, -acc);
  }
  double mass = 0.0;
  for (double v : mu.entries()) mass += v;
  worst = std::max(worst, std::fabs(mass - 1.0));
  return worst;
}

namespace {

std::vector<std::vector<double>> coordinate_bounds(const GameMatrix& u, LPDirection direction) {
  const CESystem sys = ce_polytope(u);
  const int n = u.size();
  std::vector<std::vector<double>> bounds(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<double> obj(static_cast<std::size_t>(sys.num_vars()), 0.0);
      obj[static_cast<std::size_t>(sys.flat_index(i, j))] = 1.0;
      const LPOutcome out = solve(sys.program(std::move(obj), direction));
      if (out.status != LPStatus::Optimal) {
        // The CE polytope of a finite game is never empty; anything but an
        // optimum here is an internal failure, not a property of the game.
        throw std::runtime_error("CE coordinate LP failed unexpectedly (status " +
                                 std::to_string(static_cast<int>(out.status)) + ")");
      }
      bounds[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          std::clamp(out.value, 0.0, 1.0);
    }
  }
  return bounds;
}

}  // namespace

std::vector<std::vector<double>> ce_mass_bounds(const GameMatrix& u) {
  return coordinate_bounds(u, LPDirection::Maximize);
}

std::vector<std::vector<double>> ce_mass_lower_bounds(const GameMatrix& u) {
  return coordinate_bounds(u, LPDirection::Minimize);
}

double ce_uniqueness_gap(const GameMatrix& u, const JointDistribution& candidate) {
  if (candidate.size() != u.size()) throw ValidationError("candidate distribution size mismatch");
  const auto high = ce_mass_bounds(u);
  const auto low = ce_mass_lower_bounds(u);
  double gap = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    for (int j = 0; j < u.size(); ++j) {
      const double want = candidate.at(i, j);
      gap = std::max(gap, std::fabs(high[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - want));
      gap = std::max(gap, std::fabs(low[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - want));
    }
  }
  return gap;
}

std::vector<int> strategies_used_in_ce(const GameMatrix& u, double tol) {
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const CESystem sys = ce_polytope(u);
  const int n = u.size();
  std::vector<int> used;
  for (int i = 0; i < n; ++i) {
    // Symmetrized marginal: (row i mass + column i mass) / 2.
    std::vector<double> obj(static_cast<std::size_t>(sys.num_vars()), 0.0);
    for (int l = 0; l < n; ++l) {
      obj[static_cast<std::size_t>(sys.flat_index(i, l))] += 0.5;
      obj[static_cast<std::size_t>(sys.flat_index(l, i))] += 0.5;
    }
    const LPOutcome out = solve(sys.program(std::move(obj), LPDirection::Maximize));
    if (out.status != LPStatus::Optimal) {
      throw std::runtime_error("CE marginal LP failed unexpectedly");
    }
    if (out.value > tol) used.push_back(i);
  }
  return used;
}

NashReport nash_report(const GameMatrix& u, const MixedStrategy& x) {
  if (x.size() != u.size()) throw ValidationError("nash_report: dimension mismatch");
  const auto payoffs = payoff_vector(u, x);
  double avg = 0.0;
  for (int i = 0; i < u.size(); ++i) avg += x[i] * payoffs[static_cast<std::size_t>(i)];

  NashReport report;
  report.residual = *std::max_element(payoffs.begin(), payoffs.end()) - avg;

  constexpr double tol = 1e-9;
  int vertex = -1;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] > 1.0 - tol) vertex = i;
  }
  if (vertex >= 0) {
    bool strict = true;
    for (int j = 0; j < u.size(); ++j) {
      if (j == vertex) continue;
      if (!(payoffs[static_cast<std::size_t>(j)] <
            payoffs[static_cast<std::size_t>(vertex)] - tol)) {
        strict = false;
        break;
      }
    }
    report.strict = strict;
  }
  return report;
}

}  // namespace evoelim
