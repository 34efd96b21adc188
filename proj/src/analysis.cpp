#include "evoelim/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "evoelim/lp.hpp"

namespace evoelim {

LyapunovRecord lyapunov_values(const GameMatrix& u, const GameMatrix& u0, const MixedStrategy& x) {
  if (u.size() != 4 || u0.size() != 4 || x.size() != 4) {
    throw ValidationError("lyapunov_values is defined for the 4-strategy family");
  }
  LyapunovRecord rec;

  const auto payoffs = payoff_vector(u, x);
  double diag = 0.0;
  for (int i = 0; i < 4; ++i) diag += u.at(i, i) * x[i];
  rec.V = payoffs[0] - diag;
  for (int i = 1; i < 3; ++i) rec.V = std::max(rec.V, payoffs[static_cast<std::size_t>(i)] - diag);
  rec.W = std::max(x[3], std::fabs(rec.V));

  const auto ex = excess_payoffs(u0, x);
  rec.V0 = 0.0;
  for (double k : ex.k) rec.V0 += 0.5 * k * k;

  const double head = x[0] + x[1] + x[2];
  const double root = std::cbrt(x[0] * x[1] * x[2]);
  if (head > 0.0) {
    rec.Vapp = 3.0 * root / head;
  } else {
    rec.Vapp = 0.0;
    rec.vapp_defined = false;
  }
  rec.gamma_residual = std::max(x[3], root);
  return rec;
}

double bnn_potential(const GameMatrix& u0, const MixedStrategy& x, const FCatalog& f) {
  const auto ex = excess_payoffs(u0, x);
  double total = 0.0;
  for (double k : ex.k) total += f.antiderivative(k);
  return total;
}

namespace {

// Normalized transformed excesses and their sum.
std::pair<std::vector<double>, double> transformed_excesses(const GameMatrix& u0,
                                                            const MixedStrategy& x,
                                                            const FCatalog& f) {
  const auto ex = excess_payoffs(u0, x);
  std::vector<double> fk(ex.k.size());
  double fbar = 0.0;
  for (std::size_t i = 0; i < ex.k.size(); ++i) {
    fk[i] = f(ex.k[i]);
    fbar += fk[i];
  }
  if (fbar > 0.0) {
    for (auto& v : fk) v /= fbar;
  }
  return {std::move(fk), fbar};
}

}  // namespace

double bnn_lyapunov_derivative(const GameMatrix& u0, const MixedStrategy& x, const FCatalog& f) {
  if (x.size() != u0.size()) throw ValidationError("dimension mismatch");
  const auto [q, fbar] = transformed_excesses(u0, x, f);
  if (fbar == 0.0) return 0.0;  // rest point
  std::vector<double> diff(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) diff[i] = q[i] - x[static_cast<int>(i)];
  const double self = bilinear(u0, diff, diff);
  const double cross = bilinear(u0, diff, x.weights());
  return fbar * fbar * (self - cross);
}

double bnn_q_form(const GameMatrix& u0, const MixedStrategy& x, const FCatalog& f) {
  const auto [q, fbar] = transformed_excesses(u0, x, f);
  if (fbar == 0.0) throw ValidationError("q form undefined at a rest point (kbar = 0)");
  std::vector<double> diff(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) diff[i] = q[i];
  diff[q.size() - 1] -= 1.0;  // q - e_4
  return bilinear(u0, diff, diff);
}

CharMatrix characteristic_matrix(const DynamicsSpec& spec, const GameMatrix& u) {
  if (u.size() != 4) throw ValidationError("characteristic matrix is defined for 4x4 games");
  CharMatrix cm;
  for (int i = 0; i < 3; ++i) {
    const auto g = growth_rates(spec, u, MixedStrategy::vertex(4, i));
    for (int j = 0; j < 4; ++j) {
      cm.c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g[static_cast<std::size_t>(j)];
    }
  }
  return cm;
}

Certificate hofbauer_certificate(const CharMatrix& cm) {
  // max s  s.t.  p_i >= 1,  (C p)_row + s <= 0,  s <= 1.
  LinearProgram lp(5);
  lp.objective = {0.0, 0.0, 0.0, 0.0, 1.0};
  for (int j = 0; j < 4; ++j) lp.lower[static_cast<std::size_t>(j)] = 1.0;
  lp.set_free(4);
  for (int i = 0; i < 3; ++i) {
    std::vector<double> row(5, 0.0);
    for (int j = 0; j < 4; ++j) row[static_cast<std::size_t>(j)] = cm.c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    row[4] = 1.0;
    lp.add_row(std::move(row), RowSense::LessEqual, 0.0);
  }
  lp.add_row({0.0, 0.0, 0.0, 0.0, 1.0}, RowSense::LessEqual, 1.0);

  const LPOutcome out = solve(lp);
  if (out.status != LPStatus::Optimal) {
    throw std::runtime_error("certificate LP did not reach an optimum");
  }
  Certificate cert;
  cert.slack = out.value;
  if (out.value > 1e-9) {
    cert.present = true;
    for (int j = 0; j < 4; ++j) cert.p[static_cast<std::size_t>(j)] = out.x[static_cast<std::size_t>(j)];
  }
  return cert;
}

bool vertex_inequality_check(const DynamicsSpec& spec, const GameMatrix& u) {
  const CharMatrix cm = characteristic_matrix(spec, u);
  for (int i = 0; i < 3; ++i) {
    const auto& row = cm.c[static_cast<std::size_t>(i)];
    const double succ = row[static_cast<std::size_t>((i + 1) % 3)];
    const double pred = row[static_cast<std::size_t>((i + 2) % 3)];
    if (!(row[3] < 0.0)) return false;
    if (!(succ > 0.0)) return false;
    if (!(succ < -pred)) return false;
  }
  return true;
}

bool boundary_cycle_condition(const CharMatrix& cm) {
  for (int i = 0; i < 3; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < 3; ++j) row_sum += cm.c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (!(row_sum < 0.0)) return false;
  }
  return true;
}

namespace {

struct CyclicMargins {
  std::array<double, 3> alpha{};  // u_ii - u_{i-1,i}
  std::array<double, 3> beta{};   // u_{i+1,i} - u_ii
};

CyclicMargins cyclic_margins(const GameMatrix& u) {
  CyclicMargins m;
  for (int i = 0; i < 3; ++i) {
    const int prev = (i + 2) % 3;
    const int next = (i + 1) % 3;
    m.alpha[static_cast<std::size_t>(i)] = u.at(i, i) - u.at(prev, i);
    m.beta[static_cast<std::size_t>(i)] = u.at(next, i) - u.at(i, i);
    if (!(m.alpha[static_cast<std::size_t>(i)] > 0.0) || !(m.beta[static_cast<std::size_t>(i)] > 0.0)) {
      throw ValidationError("cyclic margins alpha_" + std::to_string(i + 1) + ", beta_" +
                            std::to_string(i + 1) + " must both be positive");
    }
  }
  return m;
}

double cycle_map(const CyclicMargins& m, int start, double g) {
  const double aprod = m.alpha[0] * m.alpha[1] * m.alpha[2];
  const double bprod = m.beta[0] * m.beta[1] * m.beta[2];
  const std::size_t s0 = static_cast<std::size_t>(start % 3);
  const std::size_t s1 = static_cast<std::size_t>((start + 1) % 3);
  const std::size_t s2 = static_cast<std::size_t>((start + 2) % 3);
  const double coef = m.alpha[s0] * m.alpha[s1] + m.alpha[s0] * m.beta[s2] + m.beta[s1] * m.beta[s2];
  return aprod * g / (bprod + g * coef);
}

}  // namespace

std::vector<SwitchGapRecord> switching_gaps(const BRTrajectory& traj, const GameMatrix& u) {
  if (u.size() < 3) throw ValidationError("switching_gaps needs at least the three cyclic strategies");
  const CyclicMargins margins = cyclic_margins(u);
  std::vector<SwitchGapRecord> out;
  out.reserve(traj.switch_events.size());
  int index = 0;
  for (const auto& ev : traj.switch_events) {
    const MixedStrategy x = traj.state_at(ev.t);
    const auto payoffs = payoff_vector(u, x);
    double top = payoffs[0], bottom = payoffs[0];
    for (int i = 1; i < 3; ++i) {
      top = std::max(top, payoffs[static_cast<std::size_t>(i)]);
      bottom = std::min(bottom, payoffs[static_cast<std::size_t>(i)]);
    }
    SwitchGapRecord rec;
    rec.index = index++;
    rec.strategy = ev.new_br.front();
    rec.t = ev.t;
    rec.g_measured = top - bottom;
    rec.predicted_next = cycle_map(margins, rec.strategy, rec.g_measured);
    out.push_back(rec);
  }
  return out;
}

double gap_fixed_point(const GameMatrix& u, int strategy) {
  const CyclicMargins m = cyclic_margins(u);
  const double aprod = m.alpha[0] * m.alpha[1] * m.alpha[2];
  const double bprod = m.beta[0] * m.beta[1] * m.beta[2];
  const std::size_t s0 = static_cast<std::size_t>(strategy % 3);
  const std::size_t s1 = static_cast<std::size_t>((strategy + 1) % 3);
  const std::size_t s2 = static_cast<std::size_t>((strategy + 2) % 3);
  const double coef = m.alpha[s0] * m.alpha[s1] + m.alpha[s0] * m.beta[s2] + m.beta[s1] * m.beta[s2];
  return (aprod - bprod) / coef;
}

bool improvement_check(const BRTrajectory& traj, const GameMatrix& u) {
  for (std::size_t e = 0; e < traj.switch_events.size(); ++e) {
    const auto& ev = traj.switch_events[e];
    const int from = ev.old_br.front();
    const int to = ev.new_br.front();
    if (!(u.at(to, from) >= u.at(from, from) - 1e-12)) return false;
    const bool was_best =
        std::find(ev.old_br.begin(), ev.old_br.end(), to) != ev.old_br.end();
    if (!was_best && !(u.at(to, from) > u.at(from, from))) return false;
  }
  return true;
}

EliminationVerdict elimination_status(const std::vector<TrajectorySample>& samples, int strategy,
                                      double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("threshold must lie in (0, 1)");
  if (samples.size() < 10) {
    throw InsufficientData("elimination verdict needs at least 10 samples, got " +
                           std::to_string(samples.size()));
  }
  if (strategy < 0 || strategy >= samples.front().x.size()) {
    throw ValidationError("strategy index out of range");
  }
  EliminationVerdict verdict;
  verdict.final_mass = samples.back().x[strategy];
  verdict.eliminated = verdict.final_mass < threshold;

  const std::size_t start = samples.size() - samples.size() / 3;
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t count = 0;
  for (std::size_t i = start; i < samples.size(); ++i) {
    const double t = samples[i].t;
    const double y = std::log(std::max(samples[i].x[strategy], 1e-300));
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++count;
  }
  const double denom = static_cast<double>(count) * stt - st * st;
  verdict.fitted_rate = denom != 0.0 ? (static_cast<double>(count) * sty - st * sy) / denom : 0.0;
  return verdict;
}

EliminationVerdict elimination_status(const Trajectory& traj, int strategy, double threshold) {
  return elimination_status(traj.samples, strategy, threshold);
}

EliminationVerdict elimination_status(const BRTrajectory& traj, int strategy, double threshold,
                                      double stride) {
  return elimination_status(traj.sample(stride), strategy, threshold);
}

double conservation_check(const Trajectory& traj, const ExtendedGame& g) {
  const int nbase = g.base.size();
  const int next = g.uext.size();
  if (traj.samples.empty()) throw ValidationError("empty trajectory");
  if (traj.samples.front().x.size() != next) {
    throw ValidationError("trajectory dimension does not match the extended game");
  }
  const auto& first = traj.samples.front().x;
  for (const auto& sample : traj.samples) {
    for (int i = 0; i < nbase; ++i) {
      if (!(sample.x[i] > 1e-6)) {
        throw ValidationError("base coordinate " + std::to_string(i + 1) +
                              " fell to " + std::to_string(sample.x[i]) + " at t = " +
                              std::to_string(sample.t) + "; identity needs interior coordinates");
      }
    }
  }
  double worst = 0.0;
  for (const auto& sample : traj.samples) {
    for (int k = nbase; k < next; ++k) {
      const auto& pk = g.strategies[static_cast<std::size_t>(k)];
      double predicted = first[k];
      for (int i = 0; i < nbase; ++i) {
        predicted *= std::pow(sample.x[i] / first[i], pk[i]);
      }
      const double actual = sample.x[k];
      if (actual <= 0.0) {
        throw ValidationError("extended coordinate " + std::to_string(k + 1) +
                              " vanished along the trajectory");
      }
      worst = std::max(worst, std::fabs(actual - predicted) / actual);
    }
  }
  return worst;
}

double default_elimination_horizon(const DynamicsSpec& spec) {
  switch (spec.kind) {
    case DynamicsSpec::Kind::BestResponse: return 40.0;
    case DynamicsSpec::Kind::Replicator: return 150.0;
    case DynamicsSpec::Kind::MonotonicExp: return 150.0;
    case DynamicsSpec::Kind::BNN: return 200.0;
  }
  return 150.0;
}

BasinResult basin_fraction(const DynamicsSpec& spec, const GameMatrix& u, const SamplerSpec& sampler,
                           const BasinCriterion& criterion, int jobs) {
  if (sampler.count < 1) throw ValidationError("sampler count must be >= 1");
  const double horizon =
      criterion.horizon > 0.0 ? criterion.horizon : default_elimination_horizon(spec);
  const int n = u.size();

  // Draw the accepted initial conditions up front so the result does not
  // depend on scheduling.
  SplitMix64 rng(sampler.seed);
  std::vector<MixedStrategy> starts;
  starts.reserve(static_cast<std::size_t>(sampler.count));
  const long long draw_cap = 10'000LL * sampler.count;
  long long draws = 0;
  while (static_cast<int>(starts.size()) < sampler.count) {
    if (++draws > draw_cap) {
      throw ValidationError("sampler filter accepted too few points (cap " +
                            std::to_string(draw_cap) + " draws)");
    }
    MixedStrategy x(simplex_sample(rng, n));
    if (!sampler.filter || sampler.filter(x)) starts.push_back(std::move(x));
  }

  enum class Outcome : std::uint8_t { Satisfied, NotSatisfied, Failed };
  std::vector<Outcome> outcomes(starts.size(), Outcome::NotSatisfied);

  auto evaluate = [&](const MixedStrategy& x0) -> Outcome {
    try {
      if (spec.kind == DynamicsSpec::Kind::BestResponse) {
        const auto br = best_responses(u, x0);
        if (br.size() != 1) return Outcome::Failed;  // tied start: outside the covered class
        if (br.front() > 2) {
          // The safe strategy is the unique best reply; the solution heads to
          // its vertex and stays, so the criterion strategy is not eliminated.
          return criterion.strategy <= 2 ? Outcome::Satisfied : Outcome::NotSatisfied;
        }
        const BRTrajectory traj = integrate_br(u, x0, horizon);
        const double final_mass = traj.state_at(horizon)[criterion.strategy];
        return final_mass < criterion.threshold ? Outcome::Satisfied : Outcome::NotSatisfied;
      }
      const Trajectory traj = integrate_smooth(spec, u, x0, horizon, criterion.tol, horizon / 16.0);
      const double final_mass = traj.samples.back().x[criterion.strategy];
      return final_mass < criterion.threshold ? Outcome::Satisfied : Outcome::NotSatisfied;
    } catch (const IntegrationFailureSignal&) {
      return Outcome::Failed;
    }
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(starts.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) outcomes[i] = evaluate(starts[i]);
  } else {
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= starts.size()) return;
        outcomes[i] = evaluate(starts[i]);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BasinResult result;
  for (const Outcome o : outcomes) {
    switch (o) {
      case Outcome::Satisfied: ++result.satisfied; break;
      case Outcome::Failed: ++result.failures; break;
      case Outcome::NotSatisfied: break;
    }
  }
  result.evaluated = static_cast<int>(outcomes.size());
  const int denominator =
      sampler.exclude_failures ? result.evaluated - result.failures : result.evaluated;
  result.fraction = denominator > 0 ? static_cast<double>(result.satisfied) / denominator : 0.0;
  return result;
}

}  // namespace evoelim
