#include "evoelim/io.hpp"

#include <cstdio>
#include <ostream>

namespace evoelim {

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json game_to_json(const GameMatrix& u, const std::optional<RPS4Params>& meta) {
  json rows = json::array();
  for (int i = 0; i < u.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < u.size(); ++j) row.push_back(u.at(i, j));
    rows.push_back(std::move(row));
  }
  json out = {{"n", u.size()}, {"u", std::move(rows)}};
  if (meta) out["meta"] = {{"epsilon", meta->epsilon}, {"alpha", meta->alpha}};
  return out;
}

GameMatrix game_from_json(const json& j) {
  if (!j.contains("n") || !j.contains("u")) {
    throw ValidationError("game JSON must contain \"n\" and \"u\"");
  }
  const int n = j.at("n").get<int>();
  const auto& rows = j.at("u");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw ValidationError("game JSON: \"u\" must be an n-row array");
  }
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ValidationError("game JSON: every row of \"u\" must have n entries");
    }
    for (const auto& v : row) entries.push_back(v.get<double>());
  }
  return GameMatrix(n, std::move(entries));
}

json extended_game_to_json(const ExtendedGame& g, const std::optional<RPS4Params>& meta) {
  json out = game_to_json(g.uext, meta);
  json strategies = json::array();
  for (const auto& p : g.strategies) {
    json w = json::array();
    for (double v : p.weights()) w.push_back(v);
    strategies.push_back(std::move(w));
  }
  out["strategies"] = std::move(strategies);
  out["base"] = game_to_json(g.base);
  return out;
}

ExtendedGame extended_game_from_json(const json& j) {
  if (!j.contains("base") || !j.contains("strategies")) {
    throw ValidationError("extended game JSON must contain \"base\" and \"strategies\"");
  }
  const GameMatrix base = game_from_json(j.at("base"));
  std::vector<MixedStrategy> extras;
  const auto& strategies = j.at("strategies");
  for (std::size_t k = static_cast<std::size_t>(base.size()); k < strategies.size(); ++k) {
    extras.emplace_back(strategies[k].get<std::vector<double>>());
  }
  return extend_with_mixed(base, extras);
}

json dynamics_to_json(const DynamicsSpec& spec) {
  json out;
  switch (spec.kind) {
    case DynamicsSpec::Kind::Replicator: out["kind"] = "replicator"; break;
    case DynamicsSpec::Kind::BNN: out["kind"] = "bnn"; break;
    case DynamicsSpec::Kind::MonotonicExp: out["kind"] = "monotonic_exp"; break;
    case DynamicsSpec::Kind::BestResponse: out["kind"] = "best_response"; break;
  }
  if (spec.kind == DynamicsSpec::Kind::BNN) {
    switch (spec.f.tag) {
      case FCatalog::Tag::Identity: out["f"] = "identity"; break;
      case FCatalog::Tag::Power:
        out["f"] = "power";
        out["p"] = spec.f.p;
        break;
      case FCatalog::Tag::Sqrt: out["f"] = "sqrt"; break;
    }
  }
  if (spec.kind == DynamicsSpec::Kind::MonotonicExp) out["lambda"] = spec.lambda;
  return out;
}

DynamicsSpec dynamics_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "replicator") return DynamicsSpec::replicator();
  if (kind == "best_response") return DynamicsSpec::best_response();
  if (kind == "monotonic_exp") {
    return DynamicsSpec::monotonic_exp(j.value("lambda", 1.0));
  }
  if (kind == "bnn") {
    const std::string f = j.value("f", "identity");
    if (f == "identity") return DynamicsSpec::bnn(FCatalog::identity());
    if (f == "power") return DynamicsSpec::bnn(FCatalog::power(j.value("p", 2.0)));
    if (f == "sqrt") return DynamicsSpec::bnn(FCatalog::sqrt());
    throw ValidationError("unknown excess-payoff transform \"" + f + "\"");
  }
  throw ValidationError("unknown dynamics kind \"" + kind + "\"");
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& samples) {
  if (samples.empty()) throw ValidationError("cannot write an empty trajectory");
  os << 't';
  for (int i = 0; i < samples.front().x.size(); ++i) os << ",x" << (i + 1);
  os << '\n';
  for (const auto& sample : samples) {
    os << format_float(sample.t);
    for (int i = 0; i < sample.x.size(); ++i) os << ',' << format_float(sample.x[i]);
    os << '\n';
  }
}

void write_events_csv(std::ostream& os, const BRTrajectory& traj) {
  os << "t,from,to\n";
  for (const auto& ev : traj.switch_events) {
    os << format_float(ev.t) << ',' << (ev.old_br.front() + 1) << ',' << (ev.new_br.front() + 1)
       << '\n';
  }
}

}  // namespace evoelim
