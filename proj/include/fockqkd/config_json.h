#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fockqkd/fock_state.h"
#include "fockqkd/protocol.h"

namespace fockqkd {

// Config problem located at a dotted field path ("source.p").
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::invalid_argument(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Schema:
//   rounds (required), seed, threads, basis_set: ["HV", "DA", <radians>...],
//   double_click_policy: "keep" | "discard",
//   source: {type: "singlet"} | {type: "spdc", tanh_xi, phi, n_max}
//         | {type: "attack_mixture", p},
//   eve:    {type: "none"} | {type: "split_attack", max_attempts, mode: "analytic"|"monte_carlo"}
//         | {type: "intercept_resend", basis: "HV"|"DA"|"random"|<radians>}
// Unknown keys are rejected.
SessionConfig session_config_from_json(const nlohmann::json& document);
nlohmann::json to_json(const SessionConfig& config);
nlohmann::json to_json(const SessionReport& report);
nlohmann::json to_json(const LeakBound& leak);
// Terms as [{counts: [...], re, im}] in occupation order.
nlohmann::json terms_to_json(const StateVector& state);

// Rounds every floating-point value to 9 significant digits (and folds -0.0) so
// serialized output is byte-stable.
nlohmann::json round_numbers(const nlohmann::json& value);

}  // namespace fockqkd
