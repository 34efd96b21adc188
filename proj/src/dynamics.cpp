#include "evoelim/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace evoelim {

FCatalog FCatalog::power(double exponent) {
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    throw ValidationError("power exponent must be finite and >= 1, got " + std::to_string(exponent));
  }
  return FCatalog{Tag::Power, exponent};
}

double FCatalog::operator()(double k) const {
  switch (tag) {
    case Tag::Identity: return k;
    case Tag::Power: return std::pow(k, p);
    case Tag::Sqrt: return std::sqrt(k);
  }
  return k;
}

double FCatalog::antiderivative(double k) const {
  switch (tag) {
    case Tag::Identity: return 0.5 * k * k;
    case Tag::Power: return std::pow(k, p + 1.0) / (p + 1.0);
    case Tag::Sqrt: return (2.0 / 3.0) * k * std::sqrt(k);
  }
  return 0.5 * k * k;
}

std::string FCatalog::name() const {
  switch (tag) {
    case Tag::Identity: return "identity";
    case Tag::Power: return "power(" + std::to_string(p) + ")";
    case Tag::Sqrt: return "sqrt";
  }
  return "identity";
}

DynamicsSpec DynamicsSpec::bnn(FCatalog f) { return DynamicsSpec{Kind::BNN, f, 1.0}; }

DynamicsSpec DynamicsSpec::monotonic_exp(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("lambda must be finite and positive, got " + std::to_string(lambda));
  }
  return DynamicsSpec{Kind::MonotonicExp, FCatalog::identity(), lambda};
}

std::string DynamicsSpec::name() const {
  switch (kind) {
    case Kind::Replicator: return "replicator";
    case Kind::BNN: return "bnn[" + f.name() + "]";
    case Kind::MonotonicExp: return "monotonic_exp(" + std::to_string(lambda) + ")";
    case Kind::BestResponse: return "best_response";
  }
  return "replicator";
}

ExcessPayoffs excess_payoffs(const GameMatrix& u, const std::vector<double>& x) {
  const auto payoffs = payoff_vector(u, x);
  double avg = 0.0;
  for (std::size_t i = 0; i < payoffs.size(); ++i) avg += x[i] * payoffs[i];
  ExcessPayoffs out;
  out.k.resize(payoffs.size());
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    out.k[i] = std::max(0.0, payoffs[i] - avg);
    out.kbar += out.k[i];
  }
  out.q.assign(payoffs.size(), 0.0);
  if (out.kbar > 0.0) {
    for (std::size_t i = 0; i < payoffs.size(); ++i) out.q[i] = out.k[i] / out.kbar;
  }
  return out;
}

std::vector<double> field_raw(const DynamicsSpec& spec, const GameMatrix& u,
                              const std::vector<double>& x) {
  const int n = u.size();
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  switch (spec.kind) {
    case DynamicsSpec::Kind::Replicator: {
      const auto payoffs = payoff_vector(u, x);
      double avg = 0.0;
      for (int i = 0; i < n; ++i) avg += x[static_cast<std::size_t>(i)] * payoffs[static_cast<std::size_t>(i)];
      for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] =
            x[static_cast<std::size_t>(i)] * (payoffs[static_cast<std::size_t>(i)] - avg);
      }
      return v;
    }
    case DynamicsSpec::Kind::BNN: {
      const auto ex = excess_payoffs(u, x);
      double fbar = 0.0;
      std::vector<double> fk(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        fk[static_cast<std::size_t>(i)] = spec.f(ex.k[static_cast<std::size_t>(i)]);
        fbar += fk[static_cast<std::size_t>(i)];
      }
      for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] =
            fk[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)] * fbar;
      }
      return v;
    }
    case DynamicsSpec::Kind::MonotonicExp: {
      const auto g = growth_rates_raw(spec, u, x);
      for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
      }
      return v;
    }
    case DynamicsSpec::Kind::BestResponse:
      throw UnsupportedOperation(
          "best-response dynamics are set-valued; use integrate_br instead of field()");
  }
  return v;
}

std::vector<double> field(const DynamicsSpec& spec, const GameMatrix& u, const MixedStrategy& x) {
  if (x.size() != u.size()) throw ValidationError("field: dimension mismatch");
  return field_raw(spec, u, x.weights());
}

std::vector<double> growth_rates_raw(const DynamicsSpec& spec, const GameMatrix& u,
                                     const std::vector<double>& x) {
  const int n = u.size();
  const auto payoffs = payoff_vector(u, x);
  std::vector<double> g(static_cast<std::size_t>(n), 0.0);
  switch (spec.kind) {
    case DynamicsSpec::Kind::Replicator: {
      double avg = 0.0;
      for (int i = 0; i < n; ++i) avg += x[static_cast<std::size_t>(i)] * payoffs[static_cast<std::size_t>(i)];
      for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = payoffs[static_cast<std::size_t>(i)] - avg;
      return g;
    }
    case DynamicsSpec::Kind::MonotonicExp: {
      double weighted = 0.0;
      std::vector<double> e(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        e[static_cast<std::size_t>(i)] = std::exp(spec.lambda * payoffs[static_cast<std::size_t>(i)]);
        weighted += x[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i)];
      }
      for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)] - weighted;
      return g;
    }
    default:
      throw UnsupportedOperation("growth rates are defined only for replicator and monotonic_exp");
  }
}

std::vector<double> growth_rates(const DynamicsSpec& spec, const GameMatrix& u,
                                 const MixedStrategy& x) {
  if (x.size() != u.size()) throw ValidationError("growth_rates: dimension mismatch");
  return growth_rates_raw(spec, u, x.weights());
}

std::vector<int> best_responses_raw(const GameMatrix& u, const std::vector<double>& x, double tol) {
  if (!(tol >= 0.0)) throw ValidationError("best-response tolerance must be >= 0");
  const auto payoffs = payoff_vector(u, x);
  const double top = *std::max_element(payoffs.begin(), payoffs.end());
  std::vector<int> out;
  for (int i = 0; i < u.size(); ++i) {
    if (payoffs[static_cast<std::size_t>(i)] >= top - tol) out.push_back(i);
  }
  return out;
}

std::vector<int> best_responses(const GameMatrix& u, const MixedStrategy& x, double tol) {
  if (x.size() != u.size()) throw ValidationError("best_responses: dimension mismatch");
  return best_responses_raw(u, x.weights(), tol);
}

}  // namespace evoelim
