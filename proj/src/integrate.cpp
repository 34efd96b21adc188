#include "evoelim/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace evoelim {

namespace {

// Dormand-Prince 5(4) pair.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

constexpr double kMinStep = 1e-14;
constexpr long long kMaxSteps = 20'000'000;

std::vector<double> axpy(const std::vector<double>& y, double h,
                         std::initializer_list<std::pair<double, const std::vector<double>*>> terms) {
  std::vector<double> out = y;
  for (const auto& [c, k] : terms) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * c * (*k)[i];
  }
  return out;
}

}  // namespace

Trajectory integrate_smooth(const DynamicsSpec& spec, const GameMatrix& u, const MixedStrategy& x0,
                            double horizon, double tol, double stride) {
  if (spec.kind == DynamicsSpec::Kind::BestResponse) {
    throw UnsupportedOperation("best-response dynamics are set-valued; use integrate_br");
  }
  if (x0.size() != u.size()) throw ValidationError("integrate_smooth: dimension mismatch");
  if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
  if (!(tol >= 1e-12 && tol <= 1e-3)) {
    throw ValidationError("tolerance must lie in [1e-12, 1e-3]");
  }
  if (stride < 0.0) throw ValidationError("stride must be >= 0");
  if (stride == 0.0) stride = horizon / 256.0;

  const int n = u.size();
  Trajectory traj{spec, u, {}, {}};
  std::vector<double> y = x0.weights();
  traj.samples.push_back({0.0, MixedStrategy(y)});

  auto rhs = [&](const std::vector<double>& state) { return field_raw(spec, u, state); };
  // Which strategies currently earn above average. The excess-payoff fields
  // are only piecewise smooth; steps across a pattern change need the strict
  // per-step error budget because the embedded estimate undershoots there.
  auto activity_mask = [&](const std::vector<double>& state) {
    const auto p = payoff_vector(u, state);
    double avg = 0.0;
    for (int i = 0; i < n; ++i) avg += state[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
    unsigned mask = 0;
    for (int i = 0; i < n; ++i) {
      if (p[static_cast<std::size_t>(i)] > avg) mask |= 1u << i;
    }
    return mask;
  };
  const bool piecewise = spec.kind == DynamicsSpec::Kind::BNN;

  double t = 0.0;
  double h = std::min({1e-2, horizon, stride});
  long long next_sample = 1;

  while (t < horizon) {
    const double target = std::min(horizon, stride * static_cast<double>(next_sample));
    if (h > target - t) h = target - t;
    if (h < kMinStep) {
      throw IntegrationError("step size underflow at t = " + std::to_string(t), std::move(traj));
    }
    if (traj.stats.steps + traj.stats.rejected_steps > kMaxSteps) {
      throw IntegrationError("step budget exceeded at t = " + std::to_string(t), std::move(traj));
    }

    const auto k1 = rhs(y);
    const auto k2 = rhs(axpy(y, h, {{kA21, &k1}}));
    const auto k3 = rhs(axpy(y, h, {{kA31, &k1}, {kA32, &k2}}));
    const auto k4 = rhs(axpy(y, h, {{kA41, &k1}, {kA42, &k2}, {kA43, &k3}}));
    const auto k5 = rhs(axpy(y, h, {{kA51, &k1}, {kA52, &k2}, {kA53, &k3}, {kA54, &k4}}));
    const auto k6 =
        rhs(axpy(y, h, {{kA61, &k1}, {kA62, &k2}, {kA63, &k3}, {kA64, &k4}, {kA65, &k5}}));
    auto ynew = axpy(y, h, {{kB1, &k1}, {kB3, &k3}, {kB4, &k4}, {kB5, &k5}, {kB6, &k6}});
    const auto k7 = rhs(ynew);

    // Localize crossings of the positive-part pattern: the embedded estimate
    // cannot see them, and a straddling step carries an O(h^2) modeling error.
    // Halve until the crossing step is small enough for that error to sit
    // below tol.
    const double kink_cap = std::max(std::sqrt(tol), 1e-7);
    if (piecewise && h > kink_cap && activity_mask(y) != activity_mask(ynew)) {
      ++traj.stats.rejected_steps;
      h *= 0.5;
      continue;
    }

    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::size_t s = static_cast<std::size_t>(i);
      const double e = h * (kE1 * k1[s] + kE3 * k3[s] + kE4 * k4[s] + kE5 * k5[s] + kE6 * k6[s] +
                            kE7 * k7[s]);
      const double scale = tol + tol * std::max(std::fabs(y[s]), std::fabs(ynew[s]));
      err += (e / scale) * (e / scale);
    }
    // Error per unit step, so the endpoint error scales with tol rather than
    // with the step count. The per-step floor (tol/100 each) lets the tiny
    // localized kink-crossing steps through, where the estimate does not
    // shrink with h and a pure per-unit-step rule would stall.
    err = std::sqrt(err / n);
    err = std::min(err / h, err / 1e-2);

    if (err <= 1.0) {
      t += h;
      // Clamp and renormalize; record the drift the step produced.
      double neg = 0.0, sum = 0.0;
      for (double v : ynew) {
        neg = std::min(neg, v);
        sum += v;
      }
      const double drift = std::max(-neg, std::fabs(sum - 1.0));
      traj.stats.max_simplex_drift = std::max(traj.stats.max_simplex_drift, drift);
      double clamped = 0.0;
      for (auto& v : ynew) {
        if (v < 0.0) v = 0.0;
        clamped += v;
      }
      for (auto& v : ynew) v /= clamped;
      y = std::move(ynew);
      ++traj.stats.steps;
      if (t >= target - 1e-13) {
        t = target;
        traj.samples.push_back({t, MixedStrategy(y)});
        if (target >= horizon) break;
        while (stride * static_cast<double>(next_sample) <= target + 1e-13) ++next_sample;
      }
    } else {
      ++traj.stats.rejected_steps;
    }

    const double factor = (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h = std::min({h * factor, horizon, 1.0});
  }
  return traj;
}

namespace {

MixedStrategy to_strategy(const std::vector<double>& x) {
  return MixedStrategy(std::vector<double>(x.begin(), x.end()));
}

}  // namespace

MixedStrategy BRTrajectory::state_at(double t) const {
  if (segments.empty()) throw ValidationError("empty trajectory");
  if (t < 0.0 || t > horizon + 1e-12) throw ValidationError("time outside trajectory range");
  const BRSegment* seg = &segments.back();
  for (const auto& s : segments) {
    if (t <= s.t1) {
      seg = &s;
      break;
    }
  }
  const double decay = std::exp(-(t - seg->t0));
  std::vector<double> x = seg->x0.weights();
  for (auto& xi : x) xi *= decay;
  x[static_cast<std::size_t>(seg->target)] += 1.0 - decay;
  return MixedStrategy(std::move(x));
}

std::vector<TrajectorySample> BRTrajectory::sample(double stride) const {
  if (!(stride > 0.0)) throw ValidationError("stride must be positive");
  std::vector<TrajectorySample> out;
  for (double t = 0.0; t < horizon - 1e-12; t += stride) out.push_back({t, state_at(t)});
  out.push_back({horizon, state_at(horizon)});
  return out;
}

BRTrajectory integrate_br(const GameMatrix& u, const MixedStrategy& x0, double horizon) {
  auto path = detail::integrate_br_core<double>(u, x0.weights(), horizon);
  BRTrajectory traj;
  traj.game = u;
  traj.horizon = horizon;
  traj.segments.reserve(path.segments.size());
  for (auto& s : path.segments) {
    traj.segments.push_back({s.t0, s.t1, s.target, to_strategy(s.x0)});
  }
  traj.switch_events.reserve(path.events.size());
  for (const auto& e : path.events) {
    traj.switch_events.push_back({e.t, {e.from}, {e.to}});
  }
  return traj;
}

BRDecayReport br_decay_report(const GameMatrix& u, const MixedStrategy& x0, double horizon,
                              double stride) {
  using detail::quad;
  if (u.size() != 4) throw ValidationError("decay report is defined for the 4-strategy family");
  std::vector<quad> start(x0.weights().begin(), x0.weights().end());
  const auto path = detail::integrate_br_core<quad>(u, start, quad(horizon));

  auto value_w = [&](const std::vector<quad>& x) {
    const auto p = detail::payoffs_of<quad>(u, x);
    quad diag(0);
    for (int i = 0; i < 4; ++i) diag += quad(u.at(i, i)) * x[static_cast<std::size_t>(i)];
    quad v = p[0] - diag;
    for (int i = 1; i < 3; ++i) {
      const quad c = p[static_cast<std::size_t>(i)] - diag;
      if (c > v) v = c;
    }
    const quad av = detail::real_abs<quad>(v);
    return x[3] > av ? x[3] : av;
  };

  BRDecayReport report;
  report.num_segments = static_cast<int>(path.segments.size());
  const quad w0 = value_w(start);
  report.w_start = static_cast<double>(w0);

  const auto xe = path.state_at(quad(horizon));
  const quad wT = value_w(xe);
  report.w_end = static_cast<double>(wT);
  const quad expected = w0 * detail::real_exp<quad>(quad(-horizon));
  report.w_ratio_error = static_cast<double>(detail::real_abs<quad>(wT / expected - quad(1)));
  const quad x4_expected = start[3] * detail::real_exp<quad>(quad(-horizon));
  report.x4_ratio_error =
      start[3] > quad(0)
          ? static_cast<double>(detail::real_abs<quad>(xe[3] / x4_expected - quad(1)))
          : 0.0;

  double worst = 0.0;
  for (double t = stride; t <= horizon + 1e-12; t += stride) {
    const auto xt = path.state_at(quad(std::min(t, horizon)));
    const quad wt = value_w(xt);
    const quad want = w0 * detail::real_exp<quad>(quad(-std::min(t, horizon)));
    worst = std::max(worst, static_cast<double>(detail::real_abs<quad>(wt / want - quad(1))));
  }
  report.max_w_ratio_error = worst;
  return report;
}

}  // namespace evoelim
