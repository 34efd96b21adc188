#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "evoelim/analysis.hpp"
#include "evoelim/dynamics.hpp"
#include "evoelim/game.hpp"
#include "evoelim/integrate.hpp"

namespace evoelim {

using json = nlohmann::json;

// Game schema: { "n": int, "u": [[..]], "meta": {"epsilon":.., "alpha":..} };
// extended games add "strategies": [[..]].
json game_to_json(const GameMatrix& u, const std::optional<RPS4Params>& meta = std::nullopt);
GameMatrix game_from_json(const json& j);
json extended_game_to_json(const ExtendedGame& g, const std::optional<RPS4Params>& meta = std::nullopt);
ExtendedGame extended_game_from_json(const json& j);

// {"kind": "replicator" | "bnn" | "monotonic_exp" | "best_response",
//  "f": "identity" | "power" | "sqrt", "p": .., "lambda": ..}
json dynamics_to_json(const DynamicsSpec& spec);
DynamicsSpec dynamics_from_json(const json& j);

// Trajectory CSV: header "t,x1,...,xN", 17 significant digits per value.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& samples);
// Switch-event CSV: header "t,from,to", strategies 1-based.
void write_events_csv(std::ostream& os, const BRTrajectory& traj);

std::string format_float(double v);  // %.17g

}  // namespace evoelim
