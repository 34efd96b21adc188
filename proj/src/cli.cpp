#include "evoelim/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "evoelim/equilibria.hpp"
#include "evoelim/integrate.hpp"
#include "evoelim/io.hpp"
#include "evoelim/oracles.hpp"
#include "evoelim/verify.hpp"

namespace evoelim {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse " + what + " from \"" + s + "\"");
  }
}

std::map<std::string, std::string> parse_kv(const std::string& body) {
  std::map<std::string, std::string> kv;
  for (const auto& part : split(body, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ValidationError("expected key=value, got \"" + part + "\"");
    kv[part.substr(0, eq)] = part.substr(eq + 1);
  }
  return kv;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write to \"" + path + "\"");
  out << text;
}

void emit_report(const ExperimentConfig& config, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (config.out_file.empty()) {
    std::cout << text;
  } else {
    write_text(config.out_file, text);
  }
}

std::function<bool(const MixedStrategy&)> make_filter(const std::string& spec,
                                                      const GameMatrix& u) {
  if (spec.empty() || spec == "none") return {};
  if (spec == "br-cyclic") {
    return [&u](const MixedStrategy& x) {
      const auto br = best_responses(u, x);
      return br.size() == 1 && br.front() <= 2;
    };
  }
  const auto eq = spec.find('=');
  if (eq != std::string::npos) {
    const std::string key = spec.substr(0, eq);
    const double value = parse_double(spec.substr(eq + 1), "filter bound");
    if (key == "x4-min") {
      return [value](const MixedStrategy& x) { return x[x.size() - 1] >= value; };
    }
    if (key == "x4-max") {
      return [value](const MixedStrategy& x) { return x[x.size() - 1] <= value; };
    }
  }
  throw ValidationError("unknown filter \"" + spec + "\" (use none, br-cyclic, x4-min=V, x4-max=V)");
}

json nash_scan(const GameMatrix& u) {
  json out;
  for (int i = 0; i < u.size(); ++i) {
    const NashReport rep = nash_report(u, MixedStrategy::vertex(u.size(), i));
    out["e" + std::to_string(i + 1)] = {{"residual", rep.residual}, {"strict", rep.strict}};
  }
  return out;
}

ExitReport run_game(const ExperimentConfig& config) {
  const auto [u, meta] = parse_game_spec(config.game_spec);
  emit_report(config, game_to_json(u, meta));
  return {0, {}};
}

ExitReport run_simulate(const ExperimentConfig& config) {
  const auto [u, meta] = parse_game_spec(config.game_spec);
  if (config.x0.empty()) throw ValidationError("simulate requires --x0");
  const MixedStrategy x0{config.x0};
  const double horizon =
      config.horizon > 0.0 ? config.horizon : default_elimination_horizon(config.dynamics);
  std::filesystem::create_directories(config.out_dir);
  const std::string traj_path = config.out_dir + "/trajectory.csv";

  json report = {{"game", game_to_json(u, meta)},
                 {"dynamics", dynamics_to_json(config.dynamics)},
                 {"horizon", horizon}};
  if (config.dynamics.kind == DynamicsSpec::Kind::BestResponse) {
    const BRTrajectory traj = integrate_br(u, x0, horizon);
    const double stride = config.stride > 0.0 ? config.stride : horizon / 256.0;
    std::ofstream csv(traj_path);
    write_trajectory_csv(csv, traj.sample(stride));
    std::ofstream events(config.out_dir + "/events.csv");
    write_events_csv(events, traj);
    report["segments"] = traj.segments.size();
    report["switch_events"] = traj.switch_events.size();
    report["trajectory_csv"] = traj_path;
    report["events_csv"] = config.out_dir + "/events.csv";
  } else {
    try {
      const Trajectory traj = integrate_smooth(config.dynamics, u, x0, horizon, config.tol,
                                               config.stride);
      std::ofstream csv(traj_path);
      write_trajectory_csv(csv, traj.samples);
      report["steps"] = traj.stats.steps;
      report["rejected_steps"] = traj.stats.rejected_steps;
      report["max_simplex_drift"] = traj.stats.max_simplex_drift;
      report["trajectory_csv"] = traj_path;
    } catch (const IntegrationError& err) {
      if (!err.partial_trajectory.samples.empty()) {
        std::ofstream csv(traj_path);
        write_trajectory_csv(csv, err.partial_trajectory.samples);
      }
      report["error"] = err.what();
      report["trajectory_csv"] = traj_path;
      emit_report(config, report);
      return {3, report};
    }
  }
  emit_report(config, report);
  return {0, report};
}

ExitReport run_equilibria(const ExperimentConfig& config) {
  const auto [u, meta] = parse_game_spec(config.game_spec);
  const auto bounds = ce_mass_bounds(u);
  const auto used = strategies_used_in_ce(u);
  json used_json = json::array();
  for (int i : used) used_json.push_back(i + 1);
  json report = {{"mass_bounds", bounds}, {"used", used_json}, {"nash", nash_scan(u)}};
  emit_report(config, report);
  return {0, report};
}

ExitReport run_stability(const ExperimentConfig& config) {
  const auto [u, meta] = parse_game_spec(config.game_spec);
  const CharMatrix cm = characteristic_matrix(config.dynamics, u);
  const Certificate cert = hofbauer_certificate(cm);
  json rows = json::array();
  for (const auto& row : cm.c) rows.push_back(row);
  json report = {{"dynamics", dynamics_to_json(config.dynamics)},
                 {"characteristic_matrix", rows},
                 {"certificate",
                  {{"present", cert.present}, {"slack", cert.slack}, {"p", cert.p}}},
                 {"vertex_inequalities", vertex_inequality_check(config.dynamics, u)},
                 {"boundary_row_sums_negative", boundary_cycle_condition(cm)}};
  emit_report(config, report);
  return {cert.present ? 0 : 1, report};
}

ExitReport run_basin(const ExperimentConfig& config) {
  const auto [u, meta] = parse_game_spec(config.game_spec);
  SamplerSpec sampler;
  sampler.seed = config.seed;
  sampler.count = config.count;
  sampler.filter = make_filter(config.filter, u);
  BasinCriterion criterion;
  criterion.threshold = config.threshold;
  criterion.horizon = config.horizon;
  criterion.tol = config.tol;
  const BasinResult result = basin_fraction(config.dynamics, u, sampler, criterion, config.jobs);
  json report = {{"fraction", result.fraction},
                 {"satisfied", result.satisfied},
                 {"evaluated", result.evaluated},
                 {"failures", result.failures},
                 {"seed", config.seed},
                 {"count", config.count},
                 {"filter", config.filter}};
  emit_report(config, report);
  return {0, report};
}

ExitReport run_extend(const ExperimentConfig& config) {
  const auto [u, meta] = parse_game_spec(config.game_spec);
  if (config.extras.empty()) throw ValidationError("extend requires --extras");
  std::vector<MixedStrategy> extras;
  for (const auto& w : config.extras) extras.emplace_back(w);
  const ExtendedGame ext = extend_with_mixed(u, extras);

  json report = {{"game", extended_game_to_json(ext, meta)}};
  // Share-identity check along a short interior replicator run.
  SplitMix64 rng(config.seed);
  const int next = ext.uext.size();
  std::vector<double> w(static_cast<std::size_t>(next));
  for (;;) {
    w = simplex_sample(rng, next);
    double lo = 1.0;
    for (double v : w) lo = std::min(lo, v);
    if (lo >= 0.02) break;
  }
  const Trajectory traj = integrate_smooth(DynamicsSpec::replicator(), ext.uext, MixedStrategy(w),
                                           5.0, 1e-10, 0.25);
  const double residual = conservation_check(traj, ext);
  report["conservation_residual"] = residual;
  report["conservation_ok"] = residual <= 1e-5;

  // CE of the extension still concentrates on the safe pair after reduction.
  const auto bounds = ce_mass_bounds(ext.uext);
  double off_mass = 0.0;
  for (int k = 0; k < next; ++k) {
    for (int l = 0; l < next; ++l) {
      const bool safe_pair = ext.strategies[static_cast<std::size_t>(k)][3] == 1.0 &&
                             ext.strategies[static_cast<std::size_t>(l)][3] == 1.0;
      if (!safe_pair) off_mass = std::max(off_mass, bounds[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]);
    }
  }
  report["ce_off_safe_mass"] = off_mass;
  const bool ok = residual <= 1e-5 && off_mass <= 1e-7;
  emit_report(config, report);
  return {ok ? 0 : 1, report};
}

ExitReport run_verify(const ExperimentConfig& config) {
  const auto results = run_verification(config.suites, config.jobs);
  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
              << "  measured=" << format_float(r.measured) << " bound=" << format_float(r.bound)
              << " (" << r.seconds << "s)\n";
    all_pass = all_pass && r.pass;
  }
  std::filesystem::create_directories(config.out_dir);
  const std::string junit =
      config.junit_file.empty() ? config.out_dir + "/verify_report.xml" : config.junit_file;
  const std::string summary =
      config.json_file.empty() ? config.out_dir + "/verify_report.json" : config.json_file;
  {
    std::ofstream os(junit);
    write_junit_xml(os, results);
  }
  const json report = verification_summary_json(results);
  write_text(summary, report.dump(2) + "\n");
  std::cout << (all_pass ? "all checks passed" : "some checks FAILED") << " (reports: " << junit
            << ", " << summary << ")\n";
  return {all_pass ? 0 : 1, report};
}

}  // namespace

std::pair<GameMatrix, std::optional<RPS4Params>> parse_game_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "file") {
    std::ifstream in(body);
    if (!in) throw ValidationError("cannot open game file \"" + body + "\"");
    json j;
    in >> j;
    std::optional<RPS4Params> meta;
    if (j.contains("meta")) {
      meta = RPS4Params{j["meta"].value("epsilon", 0.0), j["meta"].value("alpha", 0.0)};
    }
    return {game_from_json(j), meta};
  }
  if (head == "rps4" || head == "rps4u" || head == "g0") {
    const auto kv = parse_kv(body);
    if (!kv.count("eps")) throw ValidationError("game spec needs eps=");
    const double eps = parse_double(kv.at("eps"), "epsilon");
    RPS4Params params{};
    if (head == "g0") {
      params = RPS4Params::g0(eps);
    } else {
      if (!kv.count("alpha")) throw ValidationError("game spec needs alpha=");
      const double alpha = parse_double(kv.at("alpha"), "alpha");
      params = head == "rps4" ? RPS4Params::valid(eps, alpha) : RPS4Params::unchecked(eps, alpha);
    }
    return {build_rps4(params), params};
  }
  throw ValidationError("unknown game spec \"" + spec + "\" (use rps4:, rps4u:, g0:, file:)");
}

ExitReport run(const ExperimentConfig& config) {
  try {
    if (config.command == "game") return run_game(config);
    if (config.command == "simulate") return run_simulate(config);
    if (config.command == "equilibria") return run_equilibria(config);
    if (config.command == "stability") return run_stability(config);
    if (config.command == "basin") return run_basin(config);
    if (config.command == "extend") return run_extend(config);
    if (config.command == "verify") return run_verify(config);
    throw ValidationError("unknown command \"" + config.command + "\"");
  } catch (const IntegrationFailureSignal& err) {
    std::cerr << "integration failure: " << err.what() << "\n";
    return {3, {{"error", err.what()}}};
  } catch (const ValidationError& err) {
    std::cerr << "invalid input: " << err.what() << "\n";
    return {2, {{"error", err.what()}}};
  } catch (const UnsupportedOperation& err) {
    std::cerr << "unsupported: " << err.what() << "\n";
    return {2, {{"error", err.what()}}};
  }
}

}  // namespace evoelim
