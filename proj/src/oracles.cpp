#include "evoelim/oracles.hpp"

#include <cmath>

namespace evoelim {

std::vector<TrajectorySample> euler_br_inclusion(const GameMatrix& u, const MixedStrategy& x0,
                                                 double horizon, double step,
                                                 double sample_stride) {
  if (!(step > 0.0) || !(horizon > 0.0) || !(sample_stride > 0.0)) {
    throw ValidationError("horizon, step and sample stride must be positive");
  }
  const int n = u.size();
  std::vector<double> x = x0.weights();
  std::vector<TrajectorySample> samples;
  samples.push_back({0.0, MixedStrategy(x)});

  const long long total = static_cast<long long>(std::ceil(horizon / step));
  const long long per_sample = std::max<long long>(1, static_cast<long long>(sample_stride / step));
  for (long long k = 0; k < total; ++k) {
    const double h = std::min(step, horizon - static_cast<double>(k) * step);
    const auto payoffs = payoff_vector(u, x);
    int best = 0;
    for (int i = 1; i < n; ++i) {
      if (payoffs[static_cast<std::size_t>(i)] > payoffs[static_cast<std::size_t>(best)]) best = i;
    }
    for (int i = 0; i < n; ++i) {
      const double target = (i == best) ? 1.0 : 0.0;
      x[static_cast<std::size_t>(i)] += h * (target - x[static_cast<std::size_t>(i)]);
    }
    if ((k + 1) % per_sample == 0 || k + 1 == total) {
      samples.push_back({std::min(static_cast<double>(k + 1) * step, horizon), MixedStrategy(x)});
    }
  }
  return samples;
}

}  // namespace evoelim
