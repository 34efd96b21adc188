#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evoelim/analysis.hpp"
#include "evoelim/dynamics.hpp"
#include "evoelim/game.hpp"

namespace evoelim {

// Everything a subcommand run needs, merged from config file, environment and
// flags (flags win over the file; EVOELIM_SEED wins over the file's seed).
struct ExperimentConfig {
  std::string command;  // game | simulate | equilibria | stability | basin | extend | verify

  std::string game_spec = "rps4:eps=0.1,alpha=0.1";
  DynamicsSpec dynamics = DynamicsSpec::replicator();
  std::vector<double> x0;
  std::vector<std::vector<double>> extras;

  double horizon = 0.0;  // 0 picks a per-dynamics default
  double tol = 1e-9;
  double stride = 0.0;
  double threshold = 1e-8;

  std::uint64_t seed = 1;
  int count = 100;
  std::string filter = "none";
  int jobs = 1;

  std::vector<std::string> suites = {"all"};
  std::string out_dir = ".";
  std::string out_file;    // empty = stdout
  std::string junit_file;  // verify only; empty = <out_dir>/verify_report.xml
  std::string json_file;   // verify only; empty = <out_dir>/verify_report.json
};

struct ExitReport {
  int exit_code = 0;
  nlohmann::json report;
};

// Parses "rps4:eps=..,alpha=..", "g0:eps=..", "rps4u:eps=..,alpha=.."
// (unchecked alpha) or "file:<path>" (game JSON schema).
std::pair<GameMatrix, std::optional<RPS4Params>> parse_game_spec(const std::string& spec);

// Executes the configured subcommand. Validation problems exit 2, integration
// failures exit 3 (with partial artifacts already written), failed checks 1.
ExitReport run(const ExperimentConfig& config);

}  // namespace evoelim
