#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "evoelim/cli.hpp"
#include "evoelim/io.hpp"

namespace {

using evoelim::ExperimentConfig;

evoelim::DynamicsSpec parse_dynamics(const std::string& kind, const std::string& f, double p,
                                     double lambda) {
  if (kind == "replicator") return evoelim::DynamicsSpec::replicator();
  if (kind == "br" || kind == "best_response") return evoelim::DynamicsSpec::best_response();
  if (kind == "monotonic_exp" || kind == "mexp") return evoelim::DynamicsSpec::monotonic_exp(lambda);
  if (kind == "bnn") {
    if (f == "identity") return evoelim::DynamicsSpec::bnn(evoelim::FCatalog::identity());
    if (f == "power") return evoelim::DynamicsSpec::bnn(evoelim::FCatalog::power(p));
    if (f == "sqrt") return evoelim::DynamicsSpec::bnn(evoelim::FCatalog::sqrt());
    throw evoelim::ValidationError("unknown transform \"" + f + "\"");
  }
  throw evoelim::ValidationError("unknown dynamics \"" + kind + "\"");
}

std::vector<double> parse_csv_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void load_config_file(const std::string& path, ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw evoelim::ValidationError("cannot open config file \"" + path + "\"");
  nlohmann::json j;
  in >> j;
  if (j.contains("game")) config.game_spec = j["game"].get<std::string>();
  if (j.contains("dynamics")) config.dynamics = evoelim::dynamics_from_json(j["dynamics"]);
  if (j.contains("x0")) config.x0 = j["x0"].get<std::vector<double>>();
  if (j.contains("extras")) config.extras = j["extras"].get<std::vector<std::vector<double>>>();
  if (j.contains("horizon")) config.horizon = j["horizon"].get<double>();
  if (j.contains("tol")) config.tol = j["tol"].get<double>();
  if (j.contains("stride")) config.stride = j["stride"].get<double>();
  if (j.contains("threshold")) config.threshold = j["threshold"].get<double>();
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("count")) config.count = j["count"].get<int>();
  if (j.contains("filter")) config.filter = j["filter"].get<std::string>();
  if (j.contains("jobs")) config.jobs = j["jobs"].get<int>();
  if (j.contains("suites")) config.suites = j["suites"].get<std::vector<std::string>>();
  if (j.contains("out_dir")) config.out_dir = j["out_dir"].get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evoelim: equilibrium probing and evolutionary dynamics on the 4x4 cyclic family"};
  app.require_subcommand(1);

  ExperimentConfig config;
  std::string config_path;
  std::string dyn = "replicator", f = "identity", x0_csv, suites_csv = "all";
  std::vector<std::string> extras_specs;
  double p = 2.0, lambda = 1.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
    cmd->add_option("--game", config.game_spec,
                    "game spec: rps4:eps=E,alpha=A | rps4u:... | g0:eps=E | file:PATH");
    cmd->add_option("--out", config.out_file, "write the JSON report here instead of stdout");
    cmd->add_option("--out-dir", config.out_dir, "directory for generated artifacts");
  };
  auto add_dynamics = [&](CLI::App* cmd) {
    cmd->add_option("--dyn", dyn, "replicator | bnn | monotonic_exp | br");
    cmd->add_option("--f", f, "bnn transform: identity | power | sqrt");
    cmd->add_option("--p", p, "exponent for --f power");
    cmd->add_option("--lambda", lambda, "monotonic_exp steepness");
  };

  auto* game_cmd = app.add_subcommand("game", "emit the payoff matrix as JSON");
  add_common(game_cmd);

  auto* sim = app.add_subcommand("simulate", "integrate one trajectory and write CSV artifacts");
  add_common(sim);
  add_dynamics(sim);
  sim->add_option("--x0", x0_csv, "initial condition, comma separated");
  sim->add_option("--t", config.horizon, "time horizon");
  sim->add_option("--tol", config.tol, "integrator tolerance");
  sim->add_option("--stride", config.stride, "sample stride (0 = auto)");

  auto* eq = app.add_subcommand("equilibria", "CE mass bounds, used strategies, Nash reports");
  add_common(eq);

  auto* stab = app.add_subcommand("stability", "characteristic matrix, certificate, inequalities");
  add_common(stab);
  add_dynamics(stab);

  auto* basin = app.add_subcommand("basin", "fraction of sampled starts eliminating the safe strategy");
  add_common(basin);
  add_dynamics(basin);
  basin->add_option("--count", config.count, "number of accepted samples");
  basin->add_option("--seed", config.seed, "sampler seed");
  basin->add_option("--filter", config.filter, "none | br-cyclic | x4-min=V | x4-max=V");
  basin->add_option("--t", config.horizon, "horizon (0 = per-dynamics default)");
  basin->add_option("--threshold", config.threshold, "elimination threshold");
  basin->add_option("--tol", config.tol, "integrator tolerance");
  basin->add_option("--jobs", config.jobs, "worker threads");

  auto* ext = app.add_subcommand("extend", "build the mixed-strategy extension and run its checks");
  add_common(ext);
  ext->add_option("--extras", extras_specs,
                  "added mixed strategy, comma separated; repeat the flag per strategy");
  ext->add_option("--seed", config.seed, "seed for the interior run");

  auto* ver = app.add_subcommand("verify", "run acceptance check suites, emit JUnit XML + JSON");
  add_common(ver);
  ver->add_option("--suite", suites_csv, "comma-separated suite names or \"all\"");
  ver->add_option("--jobs", config.jobs, "worker threads");
  ver->add_option("--junit", config.junit_file, "JUnit XML path");
  ver->add_option("--json", config.json_file, "JSON summary path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    // Start from file config, then re-apply flags so they win.
    if (!config_path.empty()) {
      ExperimentConfig from_file;
      load_config_file(config_path, from_file);
      const ExperimentConfig flag_values = config;
      config = from_file;
      auto keep = [&](auto member, auto cli_opt) {
        if (cli_opt->count() > 0) config.*member = flag_values.*member;
      };
      for (auto* cmd : {game_cmd, sim, eq, stab, basin, ext, ver}) {
        if (!cmd->parsed()) continue;
        if (auto* opt = cmd->get_option_no_throw("--game")) keep(&ExperimentConfig::game_spec, opt);
        if (auto* opt = cmd->get_option_no_throw("--out")) keep(&ExperimentConfig::out_file, opt);
        if (auto* opt = cmd->get_option_no_throw("--out-dir")) keep(&ExperimentConfig::out_dir, opt);
        if (auto* opt = cmd->get_option_no_throw("--t")) keep(&ExperimentConfig::horizon, opt);
        if (auto* opt = cmd->get_option_no_throw("--tol")) keep(&ExperimentConfig::tol, opt);
        if (auto* opt = cmd->get_option_no_throw("--stride")) keep(&ExperimentConfig::stride, opt);
        if (auto* opt = cmd->get_option_no_throw("--threshold"))
          keep(&ExperimentConfig::threshold, opt);
        if (auto* opt = cmd->get_option_no_throw("--seed")) keep(&ExperimentConfig::seed, opt);
        if (auto* opt = cmd->get_option_no_throw("--count")) keep(&ExperimentConfig::count, opt);
        if (auto* opt = cmd->get_option_no_throw("--filter")) keep(&ExperimentConfig::filter, opt);
        if (auto* opt = cmd->get_option_no_throw("--jobs")) keep(&ExperimentConfig::jobs, opt);
        if (auto* opt = cmd->get_option_no_throw("--junit")) keep(&ExperimentConfig::junit_file, opt);
        if (auto* opt = cmd->get_option_no_throw("--json")) keep(&ExperimentConfig::json_file, opt);
      }
    }
    if (const char* env_seed = std::getenv("EVOELIM_SEED")) {
      config.seed = std::stoull(env_seed);
    }

    for (auto* cmd : {game_cmd, sim, eq, stab, basin, ext, ver}) {
      if (cmd->parsed()) config.command = cmd->get_name();
    }
    if (sim->parsed() || stab->parsed() || basin->parsed()) {
      const bool dyn_given = app.get_subcommand_ptr(config.command)
                                 ->get_option_no_throw("--dyn")
                                 ->count() > 0;
      if (dyn_given || config_path.empty()) config.dynamics = parse_dynamics(dyn, f, p, lambda);
    }
    if (!x0_csv.empty()) config.x0 = parse_csv_numbers(x0_csv);
    if (!extras_specs.empty()) {
      config.extras.clear();
      for (const auto& spec : extras_specs) config.extras.push_back(parse_csv_numbers(spec));
    }
    if (ver->parsed()) {
      config.suites.clear();
      std::stringstream ss(suites_csv);
      std::string part;
      while (std::getline(ss, part, ',')) config.suites.push_back(part);
    }

    return evoelim::run(config).exit_code;
  } catch (const evoelim::ValidationError& err) {
    std::cerr << "invalid input: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
}
