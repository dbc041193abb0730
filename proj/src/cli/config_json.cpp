#include "fockqkd/config_json.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

namespace fockqkd {

namespace {

using nlohmann::json;

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& object, const std::string& path,
                    const std::set<std::string>& allowed) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(join(path, key), "unknown field");
    }
  }
}

const json& require_object(const json& value, const std::string& path) {
  if (!value.is_object()) {
    throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  }
  return value;
}

double number_field(const json& object, const std::string& path, const std::string& key,
                    double fallback) {
  if (!object.contains(key)) {
    return fallback;
  }
  const json& value = object.at(key);
  if (!value.is_number()) {
    throw ConfigError(join(path, key), "expected a number");
  }
  return value.get<double>();
}

std::uint64_t unsigned_field(const json& object, const std::string& path, const std::string& key,
                             std::optional<std::uint64_t> fallback) {
  if (!object.contains(key)) {
    if (!fallback) {
      throw ConfigError(join(path, key), "required field is missing");
    }
    return *fallback;
  }
  const json& value = object.at(key);
  if (!value.is_number_unsigned()) {
    throw ConfigError(join(path, key), "expected a non-negative integer");
  }
  return value.get<std::uint64_t>();
}

std::string string_field(const json& object, const std::string& path, const std::string& key,
                         std::optional<std::string> fallback) {
  if (!object.contains(key)) {
    if (!fallback) {
      throw ConfigError(join(path, key), "required field is missing");
    }
    return *fallback;
  }
  const json& value = object.at(key);
  if (!value.is_string()) {
    throw ConfigError(join(path, key), "expected a string");
  }
  return value.get<std::string>();
}

BasisAngle basis_from_json(const json& value, const std::string& path) {
  try {
    if (value.is_string()) {
      return parse_basis(value.get<std::string>());
    }
    if (value.is_number()) {
      return BasisAngle(value.get<double>());
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "expected \"HV\", \"DA\" or an angle in radians");
}

json basis_to_json(const BasisAngle& basis) {
  if (basis.is_hv() || basis.is_da()) {
    return basis.name();
  }
  return basis.theta();
}

SourceConfig source_from_json(const json& value, const std::string& path) {
  require_object(value, path);
  SourceConfig source;
  const std::string type = string_field(value, path, "type", std::nullopt);
  if (type == "singlet") {
    reject_unknown(value, path, {"type"});
    source.kind = SourceKind::kSinglet;
  } else if (type == "spdc") {
    reject_unknown(value, path, {"type", "tanh_xi", "phi", "n_max"});
    source.kind = SourceKind::kSpdc;
    source.spdc.tanh_xi = number_field(value, path, "tanh_xi", source.spdc.tanh_xi);
    source.spdc.phi = number_field(value, path, "phi", source.spdc.phi);
    source.spdc.n_max = static_cast<int>(
        unsigned_field(value, path, "n_max", static_cast<std::uint64_t>(source.spdc.n_max)));
    if (!(source.spdc.tanh_xi >= 0.0 && source.spdc.tanh_xi < 1.0)) {
      throw ConfigError(join(path, "tanh_xi"), "must lie in [0, 1)");
    }
    if (source.spdc.n_max > SpdcParams::kMaxPairs) {
      throw ConfigError(join(path, "n_max"),
                        "must be at most " + std::to_string(SpdcParams::kMaxPairs));
    }
  } else if (type == "attack_mixture") {
    reject_unknown(value, path, {"type", "p"});
    source.kind = SourceKind::kAttackMixture;
    if (!value.contains("p")) {
      throw ConfigError(join(path, "p"), "required field is missing");
    }
    source.attack_fraction = number_field(value, path, "p", 0.0);
    if (!(source.attack_fraction >= 0.0 && source.attack_fraction <= 1.0)) {
      throw ConfigError(join(path, "p"), "must lie in [0, 1]");
    }
  } else {
    throw ConfigError(join(path, "type"), "unknown source type '" + type + "'");
  }
  return source;
}

EveConfig eve_from_json(const json& value, const std::string& path) {
  require_object(value, path);
  EveConfig eve;
  const std::string type = string_field(value, path, "type", std::nullopt);
  if (type == "none") {
    reject_unknown(value, path, {"type"});
  } else if (type == "split_attack") {
    reject_unknown(value, path, {"type", "max_attempts", "mode"});
    eve.kind = EveKind::kSplitAttack;
    const auto attempts = unsigned_field(value, path, "max_attempts",
                                         static_cast<std::uint64_t>(eve.attack.max_attempts));
    if (attempts < 1 || attempts > 1000000) {
      throw ConfigError(join(path, "max_attempts"), "must lie in [1, 1000000]");
    }
    eve.attack.max_attempts = static_cast<int>(attempts);
    const std::string mode = string_field(value, path, "mode", "analytic");
    if (mode == "analytic") {
      eve.attack.mode = AttackMode::kAnalytic;
    } else if (mode == "monte_carlo") {
      eve.attack.mode = AttackMode::kMonteCarlo;
    } else {
      throw ConfigError(join(path, "mode"), "expected \"analytic\" or \"monte_carlo\"");
    }
  } else if (type == "intercept_resend") {
    reject_unknown(value, path, {"type", "basis"});
    eve.kind = EveKind::kInterceptResend;
    if (value.contains("basis") &&
        !(value.at("basis").is_string() && value.at("basis").get<std::string>() == "random")) {
      eve.intercept_basis = basis_from_json(value.at("basis"), join(path, "basis"));
    }
  } else {
    throw ConfigError(join(path, "type"), "unknown eve type '" + type + "'");
  }
  return eve;
}

}  // namespace

SessionConfig session_config_from_json(const json& document) {
  require_object(document, "");
  reject_unknown(document, "",
                 {"rounds", "seed", "threads", "source", "eve", "basis_set", "double_click_policy"});
  SessionConfig config;
  config.rounds = unsigned_field(document, "", "rounds", std::nullopt);
  if (config.rounds < 1) {
    throw ConfigError("rounds", "must be at least 1");
  }
  config.seed = unsigned_field(document, "", "seed", 0);
  config.threads = static_cast<unsigned>(unsigned_field(document, "", "threads", 0));
  if (document.contains("source")) {
    config.source = source_from_json(document.at("source"), "source");
  }
  if (document.contains("eve")) {
    config.eve = eve_from_json(document.at("eve"), "eve");
  }
  if (document.contains("basis_set")) {
    const json& bases = document.at("basis_set");
    if (!bases.is_array() || bases.empty()) {
      throw ConfigError("basis_set", "expected a non-empty array");
    }
    config.basis_set.clear();
    for (std::size_t i = 0; i < bases.size(); ++i) {
      config.basis_set.push_back(
          basis_from_json(bases.at(i), "basis_set[" + std::to_string(i) + "]"));
    }
  }
  const std::string policy = string_field(document, "", "double_click_policy", "keep");
  if (policy == "keep") {
    config.double_click_policy = DoubleClickPolicy::kKeep;
  } else if (policy == "discard") {
    config.double_click_policy = DoubleClickPolicy::kDiscard;
  } else {
    throw ConfigError("double_click_policy", "expected \"keep\" or \"discard\"");
  }
  try {
    config.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    const std::string message = e.what();
    const auto colon = message.find(':');
    throw ConfigError(message.substr(0, colon),
                      colon == std::string::npos ? message : message.substr(colon + 2));
  }
  return config;
}

json to_json(const SessionConfig& config) {
  json out;
  out["rounds"] = config.rounds;
  out["seed"] = config.seed;
  json bases = json::array();
  for (const auto& basis : config.basis_set) {
    bases.push_back(basis_to_json(basis));
  }
  out["basis_set"] = bases;
  out["double_click_policy"] =
      config.double_click_policy == DoubleClickPolicy::kKeep ? "keep" : "discard";

  json source;
  switch (config.source.kind) {
    case SourceKind::kSinglet:
      source["type"] = "singlet";
      break;
    case SourceKind::kSpdc:
      source["type"] = "spdc";
      source["tanh_xi"] = config.source.spdc.tanh_xi;
      source["phi"] = config.source.spdc.phi;
      source["n_max"] = config.source.spdc.n_max;
      break;
    case SourceKind::kAttackMixture:
      source["type"] = "attack_mixture";
      source["p"] = config.source.attack_fraction;
      break;
  }
  out["source"] = source;

  json eve;
  switch (config.eve.kind) {
    case EveKind::kNone:
      eve["type"] = "none";
      break;
    case EveKind::kSplitAttack:
      eve["type"] = "split_attack";
      eve["max_attempts"] = config.eve.attack.max_attempts;
      eve["mode"] = config.eve.attack.mode == AttackMode::kAnalytic ? "analytic" : "monte_carlo";
      break;
    case EveKind::kInterceptResend:
      eve["type"] = "intercept_resend";
      eve["basis"] =
          config.eve.intercept_basis ? basis_to_json(*config.eve.intercept_basis) : json("random");
      break;
  }
  out["eve"] = eve;
  return out;
}

json to_json(const LeakBound& leak) {
  return {{"eve_info", leak.eve_info}, {"bound", leak.bound}, {"margin", leak.margin}};
}

json to_json(const SessionReport& report) {
  json per_basis = json::array();
  for (const auto& basis : report.per_basis) {
    per_basis.push_back({{"basis", basis.basis},
                         {"sifted", basis.sifted},
                         {"errors", basis.errors},
                         {"qber", basis.qber}});
  }
  return {{"rounds", report.rounds},
          {"sifted_length", report.sifted_length},
          {"error_count", report.error_count},
          {"qber_hat", report.qber_hat},
          {"qber_half_width", report.qber_half_width},
          {"double_click_count", report.double_click_count},
          {"no_click_count", report.no_click_count},
          {"attack_rounds", report.attack_rounds},
          {"split_failures", report.split_failures},
          {"leak_bound", to_json(report.leak_bound)},
          {"eve_info_sigma", report.eve_info_sigma},
          {"per_basis", per_basis}};
}

json terms_to_json(const StateVector& state) {
  json terms = json::array();
  for (const auto& [occupation, amplitude] : state.terms()) {
    json counts = json::array();
    for (auto c : occupation.counts()) {
      counts.push_back(static_cast<int>(c));
    }
    terms.push_back({{"counts", counts}, {"re", amplitude.real()}, {"im", amplitude.imag()}});
  }
  return terms;
}

json round_numbers(const json& value) {
  if (value.is_number_float()) {
    const double x = value.get<double>();
    if (!std::isfinite(x)) {
      return nullptr;
    }
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.9g", x);
    return std::strtod(buffer, nullptr) + 0.0;
  }
  if (value.is_array()) {
    json out = json::array();
    for (const auto& item : value) {
      out.push_back(round_numbers(item));
    }
    return out;
  }
  if (value.is_object()) {
    json out = json::object();
    for (const auto& [key, item] : value.items()) {
      out[key] = round_numbers(item);
    }
    return out;
  }
  return value;
}

}  // namespace fockqkd
