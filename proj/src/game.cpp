#include "evoelim/game.hpp"

#include <cmath>
#include <sstream>

namespace evoelim {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<double> simplex_sample(SplitMix64& rng, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& xi : x) {
    xi = -std::log(rng.uniform());
    total += xi;
  }
  for (auto& xi : x) xi /= total;
  return x;
}

RPS4Params RPS4Params::valid(double epsilon, double alpha) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("epsilon must lie in (0, 1), got " + fmt(epsilon));
  }
  const double cap = (1.0 - epsilon) / 3.0;
  if (!(alpha > 0.0 && alpha < cap)) {
    throw ValidationError("alpha must satisfy 0 < alpha < (1 - epsilon)/3 = " + fmt(cap) +
                          ", got " + fmt(alpha));
  }
  return RPS4Params{epsilon, alpha};
}

RPS4Params RPS4Params::g0(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("epsilon must lie in (0, 1), got " + fmt(epsilon));
  }
  return RPS4Params{epsilon, 0.0};
}

RPS4Params RPS4Params::unchecked(double epsilon, double alpha) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("epsilon must lie in (0, 1), got " + fmt(epsilon));
  }
  if (!(alpha >= 0.0)) {
    throw ValidationError("alpha must be >= 0, got " + fmt(alpha));
  }
  return RPS4Params{epsilon, alpha};
}

GameMatrix::GameMatrix(int n, std::vector<double> row_major) : n_(n), u_(std::move(row_major)) {
  if (n_ <= 0) throw ValidationError("game size must be positive, got " + std::to_string(n_));
  if (u_.size() != static_cast<std::size_t>(n_) * n_) {
    throw ValidationError("payoff matrix must have n*n entries");
  }
  for (double v : u_) {
    if (!std::isfinite(v)) throw ValidationError("payoff matrix entries must be finite");
  }
}

MixedStrategy::MixedStrategy(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw ValidationError("mixed strategy must have at least one coordinate");
  double total = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (!std::isfinite(w_[i])) throw ValidationError("mixed strategy weights must be finite");
    if (w_[i] < -kSimplexTol) {
      throw ValidationError("weight " + std::to_string(i + 1) + " is " + fmt(w_[i]) +
                            ", below -tol_simplex = -" + fmt(kSimplexTol));
    }
    total += w_[i];
  }
  if (std::fabs(total - 1.0) > kSimplexTol) {
    throw ValidationError("weights sum to " + fmt(total) + ", more than tol_simplex = " +
                          fmt(kSimplexTol) + " away from 1");
  }
  double clamped = 0.0;
  for (auto& wi : w_) {
    if (wi < 0.0) {
      wi = 0.0;
      renormalized_ = true;
    }
    clamped += wi;
  }
  if (clamped != 1.0) {
    for (auto& wi : w_) wi /= clamped;
    if (std::fabs(clamped - 1.0) > 1e-15) renormalized_ = true;
  }
}

MixedStrategy MixedStrategy::vertex(int n, int i) {
  if (i < 0 || i >= n) throw ValidationError("vertex index out of range");
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  w[static_cast<std::size_t>(i)] = 1.0;
  return MixedStrategy(std::move(w));
}

JointDistribution::JointDistribution(int n, std::vector<double> row_major)
    : n_(n), m_(std::move(row_major)) {
  if (n_ <= 0) throw ValidationError("joint distribution size must be positive");
  if (m_.size() != static_cast<std::size_t>(n_) * n_) {
    throw ValidationError("joint distribution must have n*n entries");
  }
  double total = 0.0;
  for (double v : m_) {
    if (!std::isfinite(v)) throw ValidationError("joint distribution entries must be finite");
    if (v < -kSimplexTol) {
      throw ValidationError("joint distribution entry " + fmt(v) + " below -tol_simplex");
    }
    total += v;
  }
  if (std::fabs(total - 1.0) > kSimplexTol) {
    throw ValidationError("joint distribution mass is " + fmt(total) +
                          ", more than tol_simplex away from 1");
  }
  double clamped = 0.0;
  for (auto& v : m_) {
    if (v < 0.0) {
      v = 0.0;
      renormalized_ = true;
    }
    clamped += v;
  }
  if (clamped != 1.0) {
    for (auto& v : m_) v /= clamped;
    if (std::fabs(clamped - 1.0) > 1e-15) renormalized_ = true;
  }
}

JointDistribution JointDistribution::product(const MixedStrategy& x, const MixedStrategy& y) {
  if (x.size() != y.size()) throw ValidationError("product distribution: dimension mismatch");
  const int n = x.size();
  std::vector<double> m(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i) * n + j] = x[i] * y[j];
  }
  return JointDistribution(n, std::move(m));
}

GameMatrix build_rps4(const RPS4Params& params) {
  const double eps = params.epsilon;
  const double alpha = params.alpha;
  const double safe_row = (-1.0 + eps) / 3.0 + alpha;
  // Cyclic block: strategy i beats i-1 (mod 3) with eps and loses -1 to i+1.
  std::vector<double> u = {
      0.0,  -1.0, eps,  -alpha,     //
      eps,  0.0,  -1.0, -alpha,     //
      -1.0, eps,  0.0,  -alpha,     //
      safe_row, safe_row, safe_row, 0.0,
  };
  return GameMatrix(4, std::move(u));
}

GameMatrix perturb(const GameMatrix& u, const GameMatrix& delta, double rho) {
  if (u.size() != delta.size()) {
    throw ValidationError("perturbation shape mismatch: " + std::to_string(u.size()) + " vs " +
                          std::to_string(delta.size()));
  }
  if (!(rho >= 0.0)) throw ValidationError("perturbation magnitude rho must be >= 0");
  for (double v : delta.entries()) {
    if (std::fabs(v) > 1.0) throw ValidationError("perturbation direction must satisfy max|delta| <= 1");
  }
  std::vector<double> out = u.entries();
  const auto& d = delta.entries();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += rho * d[k];
  return GameMatrix(u.size(), std::move(out));
}

ExtendedGame extend_with_mixed(const GameMatrix& u, const std::vector<MixedStrategy>& extras) {
  const int n = u.size();
  std::vector<MixedStrategy> strategies;
  strategies.reserve(static_cast<std::size_t>(n) + extras.size());
  for (int i = 0; i < n; ++i) strategies.push_back(MixedStrategy::vertex(n, i));
  for (const auto& p : extras) {
    if (p.size() != n) {
      throw ValidationError("extra strategy has dimension " + std::to_string(p.size()) +
                            ", base game has " + std::to_string(n));
    }
    strategies.push_back(p);
  }
  const int next = static_cast<int>(strategies.size());
  std::vector<double> uext(static_cast<std::size_t>(next) * next);
  for (int k = 0; k < next; ++k) {
    for (int l = 0; l < next; ++l) {
      uext[static_cast<std::size_t>(k) * next + l] =
          bilinear(u, strategies[static_cast<std::size_t>(k)].weights(),
                   strategies[static_cast<std::size_t>(l)].weights());
    }
  }
  return ExtendedGame{u, std::move(strategies), GameMatrix(next, std::move(uext))};
}

MixedStrategy induce_strategy(const ExtendedGame& g, const MixedStrategy& xprime) {
  const int next = g.uext.size();
  if (xprime.size() != next) {
    throw ValidationError("profile has dimension " + std::to_string(xprime.size()) +
                          ", extended game has " + std::to_string(next));
  }
  const int n = g.base.size();
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < next; ++k) {
    const auto& p = g.strategies[static_cast<std::size_t>(k)];
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] += xprime[k] * p[i];
  }
  return MixedStrategy(std::move(x));
}

JointDistribution induce_distribution(const ExtendedGame& g, const JointDistribution& muprime) {
  const int next = g.uext.size();
  if (muprime.size() != next) {
    throw ValidationError("joint distribution has dimension " + std::to_string(muprime.size()) +
                          ", extended game has " + std::to_string(next));
  }
  const int n = g.base.size();
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int k = 0; k < next; ++k) {
    const auto& pk = g.strategies[static_cast<std::size_t>(k)];
    for (int l = 0; l < next; ++l) {
      const double w = muprime.at(k, l);
      if (w == 0.0) continue;
      const auto& pl = g.strategies[static_cast<std::size_t>(l)];
      for (int i = 0; i < n; ++i) {
        const double wpi = w * pk[i];
        if (wpi == 0.0) continue;
        for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i) * n + j] += wpi * pl[j];
      }
    }
  }
  return JointDistribution(n, std::move(m));
}

std::vector<double> payoff_vector(const GameMatrix& u, const std::vector<double>& x) {
  const int n = u.size();
  if (static_cast<int>(x.size()) != n) throw ValidationError("payoff_vector: dimension mismatch");
  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += u.at(i, j) * x[static_cast<std::size_t>(j)];
    p[static_cast<std::size_t>(i)] = acc;
  }
  return p;
}

double average_payoff(const GameMatrix& u, const std::vector<double>& x) {
  const auto p = payoff_vector(u, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += x[i] * p[i];
  return acc;
}

double bilinear(const GameMatrix& u, const std::vector<double>& a, const std::vector<double>& b) {
  const int n = u.size();
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n) {
    throw ValidationError("bilinear: dimension mismatch");
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += u.at(i, j) * b[static_cast<std::size_t>(j)];
    acc += a[static_cast<std::size_t>(i)] * row;
  }
  return acc;
}

}  // namespace evoelim
