#include "evoelim/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <thread>

#include "evoelim/analysis.hpp"
#include "evoelim/equilibria.hpp"
#include "evoelim/integrate.hpp"
#include "evoelim/io.hpp"
#include "evoelim/oracles.hpp"

namespace evoelim {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

void parallel_for(int jobs, int count, const std::function<void(int)>& body) {
  const int workers = std::max(1, std::min(jobs, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> cursor{0};
  auto drain = [&]() {
    for (;;) {
      const int i = cursor.fetch_add(1);
      if (i >= count) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
}

MixedStrategy draw_filtered(SplitMix64& rng, int n,
                            const std::function<bool(const MixedStrategy&)>& accept) {
  for (long long tries = 0; tries < 1'000'000; ++tries) {
    MixedStrategy x(simplex_sample(rng, n));
    if (accept(x)) return x;
  }
  throw ValidationError("sampler filter accepted too few points");
}

GameMatrix seeded_perturbation(const GameMatrix& u, SplitMix64& rng, double rho) {
  std::vector<double> d(u.entries().size());
  for (auto& v : d) v = 2.0 * rng.uniform() - 1.0;
  return perturb(u, GameMatrix(u.size(), std::move(d)), rho);
}

// ---- criterion 1: unique correlated equilibrium, robust to perturbation ----

CheckResult check_ce_uniqueness() {
  CheckResult res;
  res.name = "ce_uniqueness";
  res.bound = 1e-8;
  const double t0 = now_seconds();

  const JointDistribution point_mass =
      JointDistribution::product(MixedStrategy::vertex(4, 3), MixedStrategy::vertex(4, 3));
  double worst_gap = 0.0;
  for (const auto& [eps, alpha] : std::vector<std::pair<double, double>>{
           {0.1, 0.1}, {0.2, 0.1}, {0.5, 0.05}}) {
    const GameMatrix u = build_rps4(RPS4Params::valid(eps, alpha));
    worst_gap = std::max(worst_gap, ce_uniqueness_gap(u, point_mass));
  }

  bool perturbed_ok = true;
  SplitMix64 rng(1001);
  const GameMatrix base = build_rps4(RPS4Params::valid(0.2, 0.1));
  for (int k = 0; k < 20; ++k) {
    const GameMatrix g = seeded_perturbation(base, rng, 1e-3);
    const auto used = strategies_used_in_ce(g);
    perturbed_ok = perturbed_ok && (used == std::vector<int>{3});
  }

  res.seconds = now_seconds() - t0;
  res.measured = worst_gap;
  res.pass = worst_gap <= res.bound && perturbed_ok && res.seconds < 5.0;
  res.detail = "coordinate-LP gap to the safe-vertex point mass over 3 parameter pairs; 20 "
               "perturbations at rho=1e-3 keep used={4}; runtime " +
               std::to_string(res.seconds) + "s (limit 5s)";
  return res;
}

// ---- criterion 2: best-response elimination and Shapley-triangle decay ----

CheckResult check_br_elimination(int jobs) {
  CheckResult res;
  res.name = "br_elimination";
  res.bound = 1.0;  // measured is the worst bound ratio
  const double t0 = now_seconds();
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));

  SplitMix64 rng(1002);
  std::vector<MixedStrategy> starts;
  for (int k = 0; k < 50; ++k) {
    starts.push_back(draw_filtered(rng, 4, [&](const MixedStrategy& x) {
      const auto br = best_responses(u, x);
      return br.size() == 1 && br.front() <= 2;
    }));
  }

  std::vector<double> x4_err(starts.size(), 0.0);
  std::vector<double> w_err(starts.size(), 0.0);
  parallel_for(jobs, static_cast<int>(starts.size()), [&](int i) {
    const auto report = br_decay_report(u, starts[static_cast<std::size_t>(i)], 40.0);
    x4_err[static_cast<std::size_t>(i)] = report.x4_ratio_error;
    w_err[static_cast<std::size_t>(i)] = report.w_ratio_error;
  });
  const double worst_x4 = *std::max_element(x4_err.begin(), x4_err.end());
  const double worst_w = *std::max_element(w_err.begin(), w_err.end());

  res.seconds = now_seconds() - t0;
  res.measured = std::max(worst_x4 / 1e-9, worst_w / 1e-6);
  res.pass = worst_x4 <= 1e-9 && worst_w <= 1e-6 && res.seconds < 10.0;
  res.detail = "50 starts with a unique cyclic best reply, horizon 40: worst x4 law error " +
               format_float(worst_x4) + " (<=1e-9), worst W decay error " + format_float(worst_w) +
               " (<=1e-6); runtime " + std::to_string(res.seconds) + "s (limit 10s)";
  return res;
}

// ---- criterion 3: switching-gap recurrence ----

CheckResult check_switching_gaps() {
  CheckResult res;
  res.name = "switching_gaps";
  res.bound = 1.0;
  const double t0 = now_seconds();
  const double eps = 0.1;
  const GameMatrix u = build_rps4(RPS4Params::valid(eps, 0.1));
  const MixedStrategy x0(std::vector<double>{0.7, 0.15, 0.1, 0.05});
  const BRTrajectory traj = integrate_br(u, x0, 60.0);
  const auto gaps = switching_gaps(traj, u);

  double worst_pred = 0.0;
  double worst_late = 0.0;
  int pred_pairs = 0, late_count = 0;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    if (gaps[k].t >= 5.0 && k + 3 < gaps.size()) {
      const double next = gaps[k + 3].g_measured;
      worst_pred = std::max(worst_pred, std::fabs(next - gaps[k].predicted_next) / std::fabs(next));
      ++pred_pairs;
    }
    if (gaps[k].t >= 40.0) {
      worst_late =
          std::max(worst_late, std::fabs(gaps[k].g_measured - gap_fixed_point(u, gaps[k].strategy)));
      ++late_count;
    }
  }

  res.seconds = now_seconds() - t0;
  res.measured = std::max(worst_pred / 1e-6, worst_late / 1e-4);
  res.pass = pred_pairs > 0 && late_count > 0 && worst_pred <= 1e-6 && worst_late <= 1e-4;
  res.detail = "one-cycle recurrence vs measured gaps after t=5 (" + std::to_string(pred_pairs) +
               " pairs): worst rel err " + format_float(worst_pred) +
               " (<=1e-6); gaps after t=40 vs fixed point 1-eps: worst " + format_float(worst_late) +
               " (<=1e-4)";
  return res;
}

// ---- criterion 4: stability certificates across the parameter grid ----

CheckResult check_hofbauer_certificates() {
  CheckResult res;
  res.name = "hofbauer_certificates";
  res.bound = 1e-9;
  const double t0 = now_seconds();

  const std::vector<DynamicsSpec> specs = {DynamicsSpec::replicator(),
                                           DynamicsSpec::monotonic_exp(0.5),
                                           DynamicsSpec::monotonic_exp(1.0)};
  double min_slack = std::numeric_limits<double>::infinity();
  std::string inequality_failures;
  for (int ei = 1; ei <= 10; ++ei) {
    const double eps = 0.05 * ei;
    const double cap = (1.0 - eps) / 3.0;
    for (int ai = 1; ai <= 5; ++ai) {
      const double alpha = cap * ai / 6.0;
      const GameMatrix u = build_rps4(RPS4Params::valid(eps, alpha));
      for (const auto& spec : specs) {
        const Certificate cert = hofbauer_certificate(characteristic_matrix(spec, u));
        min_slack = std::min(min_slack, cert.slack);
        if (!vertex_inequality_check(spec, u)) {
          inequality_failures += " " + spec.name() + "@(eps=" + std::to_string(eps) +
                                 ",alpha=" + std::to_string(alpha) + ")";
        }
      }
    }
  }

  SplitMix64 rng(1004);
  const GameMatrix base = build_rps4(RPS4Params::valid(0.1, 0.1));
  bool perturbed_ok = true;
  for (int k = 0; k < 20; ++k) {
    const GameMatrix g = seeded_perturbation(base, rng, 1e-3);
    for (const auto& spec : specs) {
      const Certificate cert = hofbauer_certificate(characteristic_matrix(spec, g));
      min_slack = std::min(min_slack, cert.slack);
      perturbed_ok = perturbed_ok && vertex_inequality_check(spec, g);
    }
  }

  res.seconds = now_seconds() - t0;
  res.measured = min_slack;
  res.pass =
      min_slack > res.bound && inequality_failures.empty() && perturbed_ok && res.seconds < 5.0;
  res.detail = "replicator + monotonic_exp(0.5, 1.0) on the 10x5 (eps, alpha) grid and 20 "
               "perturbations of (0.1, 0.1): min certificate slack " +
               format_float(min_slack) + " (> 1e-9); vertex inequalities " +
               (inequality_failures.empty() ? "all strict"
                                            : "VIOLATED at" + inequality_failures) +
               "; perturbed inequalities " + (perturbed_ok ? "hold" : "VIOLATED") + "; runtime " +
               std::to_string(res.seconds) + "s (limit 5s)";
  return res;
}

// ---- criterion 5: replicator attraction to the boundary cycle ----

CheckResult check_replicator_gamma(int jobs) {
  CheckResult res;
  res.name = "replicator_gamma_attraction";
  res.bound = 1e-3;
  const double t0 = now_seconds();
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));
  const GameMatrix u0 = build_rps4(RPS4Params::g0(0.1));

  SplitMix64 rng(1005);
  std::vector<MixedStrategy> starts;
  for (int k = 0; k < 20; ++k) {
    starts.push_back(draw_filtered(rng, 4, [](const MixedStrategy& x) { return x[3] <= 0.2; }));
  }
  std::vector<double> residuals(starts.size(), 0.0);
  parallel_for(jobs, static_cast<int>(starts.size()), [&](int i) {
    const Trajectory traj = integrate_smooth(DynamicsSpec::replicator(), u,
                                             starts[static_cast<std::size_t>(i)], 150.0, 1e-9, 5.0);
    residuals[static_cast<std::size_t>(i)] =
        lyapunov_values(u, u0, traj.samples.back().x).gamma_residual;
  });
  const double worst_residual = *std::max_element(residuals.begin(), residuals.end());

  // Strict decrease of the geometric-mean monitor along interior runs of the
  // alpha = 0 game.
  SplitMix64 rng2(1055);
  std::vector<double> worst_delta(10, -1.0);
  std::vector<MixedStrategy> g0_starts;
  for (int k = 0; k < 10; ++k) g0_starts.emplace_back(simplex_sample(rng2, 4));
  parallel_for(jobs, 10, [&](int i) {
    const Trajectory traj = integrate_smooth(DynamicsSpec::replicator(), u0,
                                             g0_starts[static_cast<std::size_t>(i)], 40.0, 1e-10, 0.25);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 1; s < traj.samples.size(); ++s) {
      const double prev = lyapunov_values(u0, u0, traj.samples[s - 1].x).Vapp;
      const double cur = lyapunov_values(u0, u0, traj.samples[s].x).Vapp;
      worst = std::max(worst, cur - prev);
    }
    worst_delta[static_cast<std::size_t>(i)] = worst;
  });
  const double max_delta = *std::max_element(worst_delta.begin(), worst_delta.end());

  res.seconds = now_seconds() - t0;
  res.measured = worst_residual;
  res.pass = worst_residual < res.bound && max_delta < 0.0;
  res.detail = "20 interior starts with x4(0)<=0.2, horizon 150 at tol 1e-9: worst cycle residual " +
               format_float(worst_residual) +
               " (<1e-3); 10 interior alpha=0 runs: largest per-sample monitor increment " +
               format_float(max_delta) + " (<0 strictly)";
  return res;
}

// ---- criterion 6: excess-payoff dynamics eliminate the safe strategy ----

CheckResult check_bnn_elimination(int jobs) {
  CheckResult res;
  res.name = "bnn_elimination";
  res.bound = 1.0;
  const double t0 = now_seconds();
  const double eps = 0.1;
  const GameMatrix u = build_rps4(RPS4Params::valid(eps, 0.01));
  const GameMatrix u0 = build_rps4(RPS4Params::g0(eps));
  const std::vector<FCatalog> transforms = {FCatalog::identity(), FCatalog::power(2.0),
                                            FCatalog::sqrt()};

  SplitMix64 rng(1006);
  std::vector<MixedStrategy> starts;
  for (int k = 0; k < 20; ++k) {
    starts.push_back(draw_filtered(rng, 4, [&](const MixedStrategy& x) {
      return bnn_potential(u0, x) >= 0.01;
    }));
  }

  double worst_mass = 0.0;
  double worst_qform_deficit = -std::numeric_limits<double>::infinity();
  const double q_bound = (1.0 - eps) / 18.0;
  std::string mass_by_transform;
  for (const auto& f : transforms) {
    std::vector<double> masses(starts.size(), 0.0);
    std::vector<double> deficits(starts.size(), -std::numeric_limits<double>::infinity());
    parallel_for(jobs, static_cast<int>(starts.size()), [&](int i) {
      const Trajectory traj = integrate_smooth(DynamicsSpec::bnn(f), u,
                                               starts[static_cast<std::size_t>(i)], 200.0, 1e-9, 2.0);
      masses[static_cast<std::size_t>(i)] = traj.samples.back().x[3];
      double deficit = -std::numeric_limits<double>::infinity();
      for (const auto& sample : traj.samples) {
        const auto ex = excess_payoffs(u0, sample.x);
        if (ex.kbar <= 1e-9) continue;  // on (or numerically on) the equilibrium segment
        deficit = std::max(deficit, q_bound - bnn_q_form(u0, sample.x, f));
      }
      deficits[static_cast<std::size_t>(i)] = deficit;
    });
    const double mass = *std::max_element(masses.begin(), masses.end());
    mass_by_transform += " " + f.name() + ": " + format_float(mass);
    worst_mass = std::max(worst_mass, mass);
    worst_qform_deficit =
        std::max(worst_qform_deficit, *std::max_element(deficits.begin(), deficits.end()));
  }

  // Potential derivative formula vs finite differences along alpha = 0 runs.
  double worst_fd = 0.0;
  const std::vector<MixedStrategy> fd_starts = {
      MixedStrategy(std::vector<double>{0.5, 0.25, 0.15, 0.1}),
      MixedStrategy(std::vector<double>{0.2, 0.5, 0.2, 0.1})};
  for (const auto& f : transforms) {
    for (const auto& x0 : fd_starts) {
      const double h = 1e-3;
      const Trajectory traj =
          integrate_smooth(DynamicsSpec::bnn(f), u0, x0, 3.0, 1e-12, h);
      const auto& s = traj.samples;
      std::vector<double> v(s.size());
      std::vector<int> activity(s.size(), 0);
      for (std::size_t i = 0; i < s.size(); ++i) {
        v[i] = bnn_potential(u0, s[i].x, f);
        const auto ex = excess_payoffs(u0, s[i].x);
        int mask = 0;
        for (std::size_t j = 0; j < ex.k.size(); ++j) {
          if (ex.k[j] > 0.0) mask |= 1 << j;
        }
        activity[i] = mask;
      }
      for (std::size_t i = 3; i + 3 < s.size(); ++i) {
        // Finite differences are only an oracle where the positive-part
        // pattern does not change across (a margin around) the stencil.
        bool smooth = true;
        for (std::size_t w = i - 3; w <= i + 3; ++w) smooth = smooth && activity[w] == activity[i];
        if (!smooth) continue;
        const double formula = bnn_lyapunov_derivative(u0, s[i].x, f);
        if (std::fabs(formula) <= 1e-6) continue;
        const double fd = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h);
        worst_fd = std::max(worst_fd, std::fabs(fd - formula) / std::fabs(formula));
      }
    }
  }

  res.seconds = now_seconds() - t0;
  res.measured = std::max({worst_mass / 1e-4, worst_fd / 1e-3, worst_qform_deficit / 1e-9});
  res.pass = worst_mass < 1e-4 && worst_fd < 1e-3 && worst_qform_deficit <= 1e-9;
  res.detail = "20 starts with potential >= 0.01, worst x4(200) per transform:" + mass_by_transform +
               " (each <1e-4); derivative formula vs finite differences: worst rel err " +
               format_float(worst_fd) + " (<1e-3); q-form lower-bound deficit " +
               format_float(worst_qform_deficit) + " (<=1e-9)";
  return res;
}

// ---- criterion 7: robustness under added mixed strategies ----

CheckResult check_mixed_extension(int jobs) {
  CheckResult res;
  res.name = "mixed_extension";
  res.bound = 1.0;
  const double t0 = now_seconds();
  const GameMatrix base = build_rps4(RPS4Params::valid(0.1, 0.1));
  const std::vector<MixedStrategy> extras = {
      MixedStrategy(std::vector<double>{0.25, 0.25, 0.25, 0.25}),
      MixedStrategy(std::vector<double>{0.0, 0.0, 0.5, 0.5}),
      MixedStrategy(std::vector<double>{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0})};
  const ExtendedGame ext = extend_with_mixed(base, extras);
  const int next = ext.uext.size();

  // (a) the induced best-response run matches the base-game run.
  SplitMix64 rng(1007);
  double worst_proj = 0.0;
  for (int k = 0; k < 5; ++k) {
    const MixedStrategy x0p = draw_filtered(rng, next, [&](const MixedStrategy& xp) {
      const auto br = best_responses(ext.uext, xp);
      return br.size() == 1 && br.front() <= 2;
    });
    const BRTrajectory ptraj = integrate_br(ext.uext, x0p, 30.0);
    const BRTrajectory btraj = integrate_br(base, induce_strategy(ext, x0p), 30.0);
    for (double t = 0.0; t <= 30.0 + 1e-12; t += 0.05) {
      const MixedStrategy projected = induce_strategy(ext, ptraj.state_at(std::min(t, 30.0)));
      const MixedStrategy direct = btraj.state_at(std::min(t, 30.0));
      for (int i = 0; i < 4; ++i) {
        worst_proj = std::max(worst_proj, std::fabs(projected[i] - direct[i]));
      }
    }
  }

  // (b) replicator share identity on interior runs.
  SplitMix64 rng2(1077);
  double worst_conservation = 0.0;
  for (int k = 0; k < 3; ++k) {
    const MixedStrategy x0p = draw_filtered(rng2, next, [](const MixedStrategy& xp) {
      double lo = 1.0;
      for (int i = 0; i < xp.size(); ++i) lo = std::min(lo, xp[i]);
      return lo >= 0.02;
    });
    const Trajectory traj =
        integrate_smooth(DynamicsSpec::replicator(), ext.uext, x0p, 5.0, 1e-10, 0.25);
    worst_conservation = std::max(worst_conservation, conservation_check(traj, ext));
  }

  // (c) every added type that plays the safe strategy dies out near the cycle.
  SplitMix64 rng3(1777);
  std::vector<MixedStrategy> near_cycle;
  for (int k = 0; k < 5; ++k) {
    auto face = simplex_sample(rng3, 3);
    auto lowest = std::min_element(face.begin(), face.end());
    *lowest *= 0.05;  // push toward the boundary of the cyclic face
    double face_total = face[0] + face[1] + face[2];
    std::vector<double> w(static_cast<std::size_t>(next), 0.01);
    const double tail = 0.01 * (next - 4);
    for (int i = 0; i < 3; ++i) w[static_cast<std::size_t>(i)] = (1.0 - 0.01 - tail) * face[static_cast<std::size_t>(i)] / face_total;
    near_cycle.emplace_back(std::move(w));
  }
  std::vector<double> worst_masses(near_cycle.size(), 0.0);
  parallel_for(jobs, static_cast<int>(near_cycle.size()), [&](int i) {
    const Trajectory traj = integrate_smooth(DynamicsSpec::replicator(), ext.uext,
                                             near_cycle[static_cast<std::size_t>(i)], 150.0, 1e-9, 5.0);
    double worst = 0.0;
    for (int k = 3; k < next; ++k) {
      if (ext.strategies[static_cast<std::size_t>(k)][3] > 0.0) {
        worst = std::max(worst, traj.samples.back().x[k]);
      }
    }
    worst_masses[static_cast<std::size_t>(i)] = worst;
  });
  const double worst_mass = *std::max_element(worst_masses.begin(), worst_masses.end());

  res.seconds = now_seconds() - t0;
  res.measured = std::max({worst_proj / 1e-6, worst_conservation / 1e-5, worst_mass / 1e-6});
  res.pass = worst_proj <= 1e-6 && worst_conservation <= 1e-5 && worst_mass < 1e-6;
  res.detail = "projection gap of extended vs base best-response runs " + format_float(worst_proj) +
               " (<=1e-6); replicator share-identity residual " + format_float(worst_conservation) +
               " (<=1e-5); final mass of safe-playing types from near-cycle starts " +
               format_float(worst_mass) + " (<1e-6)";
  return res;
}

// ---- criterion 8: independent oracles agree with the integrators ----

CheckResult check_oracle_equivalence(int jobs) {
  CheckResult res;
  res.name = "oracle_equivalence";
  res.bound = 1.0;
  const double t0 = now_seconds();
  const GameMatrix u = build_rps4(RPS4Params::valid(0.1, 0.1));

  SplitMix64 rng(1008);
  std::vector<MixedStrategy> starts;
  for (int k = 0; k < 10; ++k) {
    starts.push_back(draw_filtered(rng, 4, [&](const MixedStrategy& x) {
      const auto br = best_responses(u, x);
      return br.size() == 1 && br.front() <= 2;
    }));
  }
  std::vector<double> gaps(starts.size(), 0.0);
  parallel_for(jobs, static_cast<int>(starts.size()), [&](int i) {
    const auto& x0 = starts[static_cast<std::size_t>(i)];
    const BRTrajectory exact = integrate_br(u, x0, 10.0);
    const auto euler = euler_br_inclusion(u, x0, 10.0, 1e-4, 0.01);
    double gap = 0.0;
    for (const auto& sample : euler) {
      const MixedStrategy x = exact.state_at(sample.t);
      for (int c = 0; c < 4; ++c) gap = std::max(gap, std::fabs(x[c] - sample.x[c]));
    }
    gaps[static_cast<std::size_t>(i)] = gap;
  });
  const double worst_euler = *std::max_element(gaps.begin(), gaps.end());

  // Short transient-phase horizon: the 10*tol budget leaves room for the
  // flow's own error amplification only while T * e^{kT} stays of order ten;
  // longer runs drift in phase along the cycle and test nothing about
  // convergence.
  double worst_endpoint = 0.0;
  const double tol = 1e-8;
  const double sanity_horizon = 2.0;
  {
    const MixedStrategy x0(std::vector<double>{0.5, 0.3, 0.19, 0.01});
    const auto a = integrate_smooth(DynamicsSpec::replicator(), u, x0, sanity_horizon, tol,
                                    sanity_horizon);
    const auto b = integrate_smooth(DynamicsSpec::replicator(), u, x0, sanity_horizon, tol / 2.0,
                                    sanity_horizon);
    for (int c = 0; c < 4; ++c) {
      worst_endpoint = std::max(worst_endpoint,
                                std::fabs(a.samples.back().x[c] - b.samples.back().x[c]));
    }
  }
  {
    const GameMatrix ub = build_rps4(RPS4Params::valid(0.1, 0.01));
    const MixedStrategy x0(std::vector<double>{0.5, 0.25, 0.15, 0.1});
    const auto a = integrate_smooth(DynamicsSpec::bnn(), ub, x0, sanity_horizon, tol,
                                    sanity_horizon);
    const auto b = integrate_smooth(DynamicsSpec::bnn(), ub, x0, sanity_horizon, tol / 2.0,
                                    sanity_horizon);
    for (int c = 0; c < 4; ++c) {
      worst_endpoint = std::max(worst_endpoint,
                                std::fabs(a.samples.back().x[c] - b.samples.back().x[c]));
    }
  }

  res.seconds = now_seconds() - t0;
  res.measured = std::max(worst_euler / 1e-3, worst_endpoint / (10.0 * tol));
  res.pass = worst_euler <= 1e-3 && worst_endpoint < 10.0 * tol;
  res.detail = "event-driven vs Euler-on-inclusion over t in [0,10], 10 starts: sup gap " +
               format_float(worst_euler) + " (<=1e-3); endpoint shift under tolerance halving " +
               format_float(worst_endpoint) + " (<1e-7)";
  return res;
}

}  // namespace

std::vector<std::string> verification_suite_names() {
  return {"ce_uniqueness",   "br_elimination", "switching_gaps", "hofbauer_certificates",
          "replicator_gamma_attraction", "bnn_elimination", "mixed_extension",
          "oracle_equivalence"};
}

std::vector<CheckResult> run_verification(const std::vector<std::string>& names, int jobs) {
  std::vector<std::string> wanted = names;
  if (wanted.empty() || (wanted.size() == 1 && wanted.front() == "all")) {
    wanted = verification_suite_names();
  }
  std::vector<CheckResult> out;
  for (const auto& name : wanted) {
    if (name == "ce_uniqueness") out.push_back(check_ce_uniqueness());
    else if (name == "br_elimination") out.push_back(check_br_elimination(jobs));
    else if (name == "switching_gaps") out.push_back(check_switching_gaps());
    else if (name == "hofbauer_certificates") out.push_back(check_hofbauer_certificates());
    else if (name == "replicator_gamma_attraction") out.push_back(check_replicator_gamma(jobs));
    else if (name == "bnn_elimination") out.push_back(check_bnn_elimination(jobs));
    else if (name == "mixed_extension") out.push_back(check_mixed_extension(jobs));
    else if (name == "oracle_equivalence") out.push_back(check_oracle_equivalence(jobs));
    else throw ValidationError("unknown check suite \"" + name + "\"");
  }
  return out;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_junit_xml(std::ostream& os, const std::vector<CheckResult>& results) {
  int failures = 0;
  double total = 0.0;
  for (const auto& r : results) {
    if (!r.pass) ++failures;
    total += r.seconds;
  }
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<testsuite name=\"evoelim-verify\" tests=\"" << results.size() << "\" failures=\""
     << failures << "\" time=\"" << total << "\">\n";
  for (const auto& r : results) {
    os << "  <testcase name=\"" << xml_escape(r.name) << "\" time=\"" << r.seconds << "\"";
    if (r.pass) {
      os << "/>\n";
    } else {
      os << ">\n    <failure message=\"measured " << format_float(r.measured) << " vs bound "
         << format_float(r.bound) << "\">" << xml_escape(r.detail) << "</failure>\n  </testcase>\n";
    }
  }
  os << "</testsuite>\n";
}

nlohmann::json verification_summary_json(const std::vector<CheckResult>& results) {
  nlohmann::json out;
  for (const auto& r : results) {
    out[r.name] = {{"pass", r.pass},
                   {"measured", r.measured},
                   {"bound", r.bound},
                   {"detail", r.detail},
                   {"seconds", r.seconds}};
  }
  return out;
}

}  // namespace evoelim
