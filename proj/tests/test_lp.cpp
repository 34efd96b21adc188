#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "evoelim/common.hpp"
#include "evoelim/lp.hpp"

using namespace evoelim;

namespace {

// Brute-force vertex enumeration for small instances of
//   max c.x  s.t.  A x <= b,  x >= 0.
// Every vertex solves n tight constraints chosen among the rows and the
// coordinate bounds. Independent of the simplex path.
double enumerate_optimum(const std::vector<double>& c, const std::vector<std::vector<double>>& a,
                         const std::vector<double>& b) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.size());
  const int total = m + n;  // rows then coordinate bounds
  double best = -std::numeric_limits<double>::infinity();

  std::vector<int> combo;
  auto feasible_value = [&](const std::vector<int>& active) {
    std::vector<std::vector<double>> mat(n, std::vector<double>(n + 1, 0.0));
    for (int r = 0; r < n; ++r) {
      const int idx = active[r];
      if (idx < m) {
        for (int j = 0; j < n; ++j) mat[r][j] = a[idx][j];
        mat[r][n] = b[idx];
      } else {
        mat[r][idx - m] = 1.0;
        mat[r][n] = 0.0;
      }
    }
    for (int col = 0; col < n; ++col) {
      int piv = -1;
      double mag = 1e-9;
      for (int r = col; r < n; ++r) {
        if (std::fabs(mat[r][col]) > mag) {
          mag = std::fabs(mat[r][col]);
          piv = r;
        }
      }
      if (piv < 0) return;  // singular choice of tight constraints
      std::swap(mat[col], mat[piv]);
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = mat[r][col] / mat[col][col];
        if (f == 0.0) continue;
        for (int j = col; j <= n; ++j) mat[r][j] -= f * mat[col][j];
      }
    }
    std::vector<double> x(n);
    for (int r = 0; r < n; ++r) x[r] = mat[r][n] / mat[r][r];
    for (int j = 0; j < n; ++j) {
      if (x[j] < -1e-9) return;
    }
    for (int r = 0; r < m; ++r) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += a[r][j] * x[j];
      if (lhs > b[r] + 1e-9) return;
    }
    double value = 0.0;
    for (int j = 0; j < n; ++j) value += c[j] * x[j];
    best = std::max(best, value);
  };

  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      feasible_value(combo);
      return;
    }
    for (int idx = start; idx < total; ++idx) {
      combo.push_back(idx);
      rec(idx + 1, depth + 1);
      combo.pop_back();
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("one-variable basics") {
  {
    LinearProgram lp(1);
    lp.objective = {1.0};
    lp.add_row({1.0}, RowSense::LessEqual, 1.0);
    const LPOutcome out = solve(lp);
    CHECK(out.status == LPStatus::Optimal);
    CHECK(out.value == doctest::Approx(1.0).epsilon(1e-9));
  }
  {
    LinearProgram lp(1);
    lp.objective = {1.0};
    lp.add_row({1.0}, RowSense::LessEqual, -1.0);
    CHECK(solve(lp).status == LPStatus::Infeasible);
  }
  {
    // Degenerate optimum: the value is pinned even though the vertex is not.
    LinearProgram lp(2);
    lp.objective = {1.0, 1.0};
    lp.add_row({1.0, 1.0}, RowSense::Equal, 1.0);
    const LPOutcome out = solve(lp);
    CHECK(out.status == LPStatus::Optimal);
    CHECK(out.value == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("unbounded and invalid input") {
  {
    LinearProgram lp(1);
    lp.objective = {1.0};
    lp.add_row({1.0}, RowSense::GreaterEqual, 1.0);
    CHECK(solve(lp).status == LPStatus::Unbounded);
  }
  {
    LinearProgram lp(1);
    lp.objective = {std::numeric_limits<double>::quiet_NaN()};
    lp.add_row({1.0}, RowSense::LessEqual, 1.0);
    CHECK_THROWS_AS(solve(lp), ValidationError);
  }
  {
    LinearProgram lp(2);
    lp.objective = {1.0, 0.0};
    lp.add_row({1.0}, RowSense::LessEqual, 1.0);  // width mismatch
    CHECK_THROWS_AS(solve(lp), ValidationError);
  }
}

TEST_CASE("bounds: shifted, free, upper") {
  {
    // min x with x >= -2 reaches the shifted lower bound.
    LinearProgram lp(1);
    lp.objective = {1.0};
    lp.direction = LPDirection::Minimize;
    lp.lower[0] = -2.0;
    lp.add_row({1.0}, RowSense::LessEqual, 5.0);
    const LPOutcome out = solve(lp);
    CHECK(out.status == LPStatus::Optimal);
    CHECK(out.x[0] == doctest::Approx(-2.0).epsilon(1e-9));
  }
  {
    // Free variable pushed negative by the objective.
    LinearProgram lp(1);
    lp.objective = {-1.0};
    lp.set_free(0);
    lp.add_row({1.0}, RowSense::GreaterEqual, -3.0);
    const LPOutcome out = solve(lp);
    CHECK(out.status == LPStatus::Optimal);
    CHECK(out.x[0] == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(out.value == doctest::Approx(3.0).epsilon(1e-9));
  }
  {
    LinearProgram lp(1);
    lp.objective = {1.0};
    lp.upper[0] = 2.5;
    lp.add_row({1.0}, RowSense::GreaterEqual, 0.0);
    const LPOutcome out = solve(lp);
    CHECK(out.status == LPStatus::Optimal);
    CHECK(out.value == doctest::Approx(2.5).epsilon(1e-9));
  }
}

TEST_CASE("simplex optimum matches vertex enumeration on seeded instances") {
  SplitMix64 rng(2024);
  for (int instance = 0; instance < 40; ++instance) {
    const int n = 2 + static_cast<int>(rng.next() % 4);
    const int m = 1 + static_cast<int>(rng.next() % 6);
    std::vector<double> c(n);
    for (auto& v : c) v = 2.0 * rng.uniform() - 1.0;
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int r = 0; r < m; ++r) {
      std::vector<double> row(n);
      for (auto& v : row) v = 2.0 * rng.uniform() - 1.0;
      a.push_back(row);
      b.push_back(rng.uniform() * 2.0);  // nonnegative keeps x = 0 feasible
    }
    a.push_back(std::vector<double>(n, 1.0));  // bounding box
    b.push_back(1.0 + 4.0 * rng.uniform());

    LinearProgram lp(n);
    lp.objective = c;
    for (std::size_t r = 0; r < a.size(); ++r) lp.add_row(a[r], RowSense::LessEqual, b[r]);
    const LPOutcome out = solve(lp);
    REQUIRE(out.status == LPStatus::Optimal);

    const double brute = enumerate_optimum(c, a, b);
    CHECK(std::fabs(out.value - brute) <= 1e-7);

    // Primal feasibility of the reported point.
    for (std::size_t r = 0; r < a.size(); ++r) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += a[r][j] * out.x[j];
      CHECK(lhs <= b[r] + kLpTol);
    }
    for (int j = 0; j < n; ++j) CHECK(out.x[j] >= -kLpTol);
  }
}

TEST_CASE("determinism: identical input gives identical output") {
  LinearProgram lp(3);
  lp.objective = {0.3, -0.2, 0.5};
  lp.add_row({1.0, 1.0, 1.0}, RowSense::LessEqual, 2.0);
  lp.add_row({1.0, -1.0, 0.0}, RowSense::GreaterEqual, 0.2);
  lp.add_row({0.0, 1.0, 2.0}, RowSense::Equal, 1.0);
  const LPOutcome a = solve(lp);
  const LPOutcome b = solve(lp);
  REQUIRE(a.status == LPStatus::Optimal);
  CHECK(a.value == b.value);
  CHECK(a.x == b.x);
}
