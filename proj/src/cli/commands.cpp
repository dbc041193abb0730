#include "fockqkd/cli.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "fockqkd/attack.h"
#include "fockqkd/config_json.h"
#include "fockqkd/metrics.h"
#include "fockqkd/protocol.h"
#include "fockqkd/spdc.h"

#ifndef FOCKQKD_VERSION
#define FOCKQKD_VERSION "0.0.0"
#endif

namespace fockqkd {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string format = "json";
  std::optional<std::uint64_t> seed;
};

std::string number_text(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.9g", x + 0.0);
  return buffer;
}

void emit(std::ostream& out, const std::string& command, const json& parameters,
          const json& results) {
  json envelope = {{"command", command},
                   {"parameters", parameters},
                   {"results", results},
                   {"tool_version", tool_version()}};
  out << round_numbers(envelope).dump(2) << '\n';
}

json mode_names(const ModeRegistry& registry) {
  json names = json::array();
  for (const auto& label : registry.labels()) {
    names.push_back(to_string(label));
  }
  return names;
}

SpdcParams spdc_from_flags(double tanh_xi, double phi, int n_max) {
  if (!(tanh_xi >= 0.0 && tanh_xi < 1.0)) {
    throw UsageError("--tanh-xi must lie in [0, 1), got " + number_text(tanh_xi));
  }
  if (!std::isfinite(phi)) {
    throw UsageError("--phi must be finite");
  }
  if (n_max < 0 || n_max > SpdcParams::kMaxPairs) {
    throw UsageError("--nmax must lie in [0, " + std::to_string(SpdcParams::kMaxPairs) +
                     "], got " + std::to_string(n_max));
  }
  SpdcParams params;
  params.tanh_xi = tanh_xi;
  params.phi = phi;
  params.n_max = n_max;
  return params;
}

// spdc-state

struct SpdcFlags {
  double tanh_xi = 0.1;
  double phi = 0.0;
  int n_max = 4;
};

void cmd_spdc_state(const SpdcFlags& flags, const GlobalOptions& global, std::ostream& out) {
  const SpdcParams params = spdc_from_flags(flags.tanh_xi, flags.phi, flags.n_max);
  const StateVector state = spdc_state(params, source_registry());
  if (global.format == "text") {
    out << dump(state);
    out << "tail " << number_text(truncation_tail(params)) << '\n';
    return;
  }
  const json parameters = {{"tanh_xi", params.tanh_xi}, {"phi", params.phi}, {"nmax", params.n_max}};
  const json results = {{"modes", mode_names(state.registry())},
                        {"terms", terms_to_json(state)},
                        {"norm_squared", state.norm_squared()},
                        {"vacuum_amplitude", vacuum_amplitude(params)},
                        {"truncation_tail", truncation_tail(params)}};
  emit(out, "spdc-state", parameters, results);
}

// pair-stats

void cmd_pair_stats(const SpdcFlags& flags, const GlobalOptions& global, std::ostream& out) {
  const SpdcParams params = spdc_from_flags(flags.tanh_xi, 0.0, flags.n_max);
  const auto stats = pair_statistics(params);
  const double tail = truncation_tail(params);
  if (global.format == "text") {
    out << "n,probability\n";
    for (const auto& [n, p] : stats) {
      out << n << ',' << number_text(p) << '\n';
    }
    out << "tail," << number_text(tail) << '\n';
    return;
  }
  json rows = json::array();
  for (const auto& [n, p] : stats) {
    rows.push_back({{"n", n}, {"probability", p}});
  }
  emit(out, "pair-stats", {{"tanh_xi", params.tanh_xi}, {"nmax", params.n_max}},
       {{"pairs", rows}, {"truncation_tail", tail}});
}

// attack-report

void cmd_attack_report(const GlobalOptions& global, std::ostream& out) {
  const StateVector state = attack_four_photon(attack_registry());
  const BasisAngle hv = BasisAngle::hv();
  const QberReport qber = qber_from_state(state, hv, hv);
  const QberReport qber_da = qber_from_state(state, BasisAngle::da(), BasisAngle::da());
  const KeyRoundLeak leak = key_round_holevo(state, hv);
  const double bound = binary_entropy(qber.qber);
  const double margin = bound - leak.chi;
  const Correlation wrong_basis = eve_wrong_basis_correlation(state);

  if (global.format == "text") {
    out << "state\n" << dump(state);
    out << "qber " << number_text(qber.qber) << '\n';
    out << "qber_da " << number_text(qber_da.qber) << '\n';
    out << "overlap " << number_text(leak.overlap.real()) << ' '
        << number_text(leak.overlap.imag()) << '\n';
    out << "chi " << number_text(leak.chi) << '\n';
    out << "bound " << number_text(bound) << '\n';
    out << "margin " << number_text(margin) << '\n';
    out << "wrong_basis_correlation " << number_text(wrong_basis.value) << '\n';
    return;
  }

  json conditional = json::array();
  for (const auto& [bits, cond] : eve_conditional_states(state, hv, hv)) {
    conditional.push_back({{"alice_bit", bits.first},
                           {"bob_bit", bits.second},
                           {"probability", cond.probability},
                           {"eve_state", terms_to_json(cond.eve_state)}});
  }
  json joint = json::array();
  for (const auto& row : qber.joint) {
    joint.push_back({row[0], row[1]});
  }
  const json results = {
      {"modes", mode_names(state.registry())},
      {"state", terms_to_json(state)},
      {"qber", qber.qber},
      {"qber_da", qber_da.qber},
      {"sift_probability", qber.sift_probability},
      {"joint", joint},
      {"eve_conditional_states", conditional},
      {"overlap", {{"re", leak.overlap.real()}, {"im", leak.overlap.imag()}}},
      {"chi", leak.chi},
      {"bound", bound},
      {"margin", margin},
      {"wrong_basis_correlation", wrong_basis.value}};
  emit(out, "attack-report", json::object(), results);
}

// sweep

struct SweepFlags {
  double p_min = 0.0;
  double p_max = 1.0;
  int steps = 11;
  std::string out_path;
};

void cmd_sweep(const SweepFlags& flags, const GlobalOptions& global, std::ostream& out) {
  if (!(flags.p_min >= 0.0 && flags.p_min <= 1.0)) {
    throw UsageError("--p-min must lie in [0, 1]");
  }
  if (!(flags.p_max >= 0.0 && flags.p_max <= 1.0)) {
    throw UsageError("--p-max must lie in [0, 1]");
  }
  if (flags.p_min > flags.p_max) {
    throw UsageError("--p-min must not exceed --p-max");
  }
  if (flags.steps < 1) {
    throw UsageError("--steps must be at least 1");
  }
  if (flags.steps == 1 && flags.p_min != flags.p_max) {
    throw UsageError("--steps 1 needs --p-min equal to --p-max");
  }

  std::ostringstream csv;
  csv << "p,qber,eve_info,bound,margin\n";
  json rows = json::array();
  for (int i = 0; i < flags.steps; ++i) {
    const double p = flags.steps == 1
                         ? flags.p_min
                         : flags.p_min + (flags.p_max - flags.p_min) * i / (flags.steps - 1);
    const LeakBound leak = leak_vs_bound(p);
    const double qber = p / 6.0;
    csv << number_text(p) << ',' << number_text(qber) << ',' << number_text(leak.eve_info) << ','
        << number_text(leak.bound) << ',' << number_text(leak.margin) << '\n';
    rows.push_back({{"p", p},
                    {"qber", qber},
                    {"eve_info", leak.eve_info},
                    {"bound", leak.bound},
                    {"margin", leak.margin}});
  }

  if (!flags.out_path.empty()) {
    std::ofstream file(flags.out_path, std::ios::binary);
    if (!file) {
      throw IoError("cannot open " + flags.out_path + " for writing");
    }
    file << csv.str();
    if (!file.flush()) {
      throw IoError("write to " + flags.out_path + " failed");
    }
  }
  if (global.format == "text") {
    if (flags.out_path.empty()) {
      out << csv.str();
    } else {
      out << "wrote " << flags.steps << " rows to " << flags.out_path << '\n';
    }
    return;
  }
  json parameters = {{"p_min", flags.p_min}, {"p_max", flags.p_max}, {"steps", flags.steps}};
  if (!flags.out_path.empty()) {
    parameters["out"] = flags.out_path;
  }
  emit(out, "sweep", parameters, {{"rows", rows}});
}

// simulate / replay

SessionConfig load_config(const std::string& path, const GlobalOptions& global) {
  std::ifstream file(path);
  if (!file) {
    throw IoError("cannot read config " + path);
  }
  json document;
  try {
    document = json::parse(file);
  } catch (const json::parse_error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (global.seed && document.is_object()) {
    document["seed"] = *global.seed;
  }
  try {
    return session_config_from_json(document);
  } catch (const ConfigError& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
}

void print_report_text(const SessionReport& report, std::ostream& out) {
  out << "rounds " << report.rounds << '\n';
  out << "sifted_length " << report.sifted_length << '\n';
  out << "error_count " << report.error_count << '\n';
  out << "qber_hat " << number_text(report.qber_hat) << " +- "
      << number_text(report.qber_half_width) << '\n';
  out << "double_click_count " << report.double_click_count << '\n';
  out << "no_click_count " << report.no_click_count << '\n';
  out << "attack_rounds " << report.attack_rounds << '\n';
  out << "split_failures " << report.split_failures << '\n';
  out << "eve_info " << number_text(report.leak_bound.eve_info) << " +- "
      << number_text(report.eve_info_sigma) << '\n';
  out << "bound " << number_text(report.leak_bound.bound) << '\n';
  out << "margin " << number_text(report.leak_bound.margin) << '\n';
  for (const auto& basis : report.per_basis) {
    out << "basis " << basis.basis << " sifted " << basis.sifted << " errors " << basis.errors
        << " qber " << number_text(basis.qber) << '\n';
  }
}

struct SessionFlags {
  std::string config_path;
  std::string transcript_path;
};

void cmd_simulate(const SessionFlags& flags, const GlobalOptions& global, std::ostream& out) {
  const SessionConfig config = load_config(flags.config_path, global);
  SessionReport report;
  if (flags.transcript_path.empty()) {
    report = run_session(config);
  } else {
    std::ofstream file(flags.transcript_path, std::ios::binary);
    if (!file) {
      throw IoError("cannot open " + flags.transcript_path + " for writing");
    }
    report = run_session(config, &file);
    if (!file.flush()) {
      throw IoError("write to " + flags.transcript_path + " failed");
    }
  }
  if (global.format == "text") {
    print_report_text(report, out);
    return;
  }
  json parameters = to_json(config);
  if (!flags.transcript_path.empty()) {
    parameters["transcript"] = flags.transcript_path;
  }
  emit(out, "simulate", parameters, to_json(report));
}

int cmd_replay(const SessionFlags& flags, const GlobalOptions& global, std::ostream& out,
               std::ostream& err) {
  const SessionConfig config = load_config(flags.config_path, global);
  std::ifstream file(flags.transcript_path, std::ios::binary);
  if (!file) {
    throw IoError("cannot read transcript " + flags.transcript_path);
  }
  ReplayResult result;
  try {
    result = replay(config, file);
  } catch (const TranscriptError& e) {
    throw UsageError("transcript " + flags.transcript_path + ": " + e.what());
  }
  if (global.format == "text") {
    print_report_text(result.report, out);
    out << "checksum " << (result.checksum_ok ? "ok" : "MISMATCH") << " recorded "
        << result.recorded_checksum << " computed " << result.computed_checksum << '\n';
  } else {
    json results = to_json(result.report);
    results["checksum_ok"] = result.checksum_ok;
    results["recorded_checksum"] = result.recorded_checksum;
    results["computed_checksum"] = result.computed_checksum;
    json parameters = to_json(config);
    parameters["transcript"] = flags.transcript_path;
    emit(out, "replay", parameters, results);
  }
  if (!result.checksum_ok) {
    err << "fockqkd: transcript checksum mismatch (recorded " << result.recorded_checksum
        << ", computed " << result.computed_checksum << ")\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

std::string tool_version() { return FOCKQKD_VERSION; }

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fock-space simulation of entanglement-based QKD under photon-splitting attacks",
               "fockqkd"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  app.add_option("--seed", global.seed, "Seed override for simulate and replay");

  SpdcFlags spdc_flags;
  auto* spdc_cmd = app.add_subcommand("spdc-state", "Truncated SPDC state and its tail mass");
  spdc_cmd->add_option("--tanh-xi", spdc_flags.tanh_xi, "tanh|xi| in [0, 1)")->capture_default_str();
  spdc_cmd->add_option("--phi", spdc_flags.phi, "Pump phase in radians")->capture_default_str();
  spdc_cmd->add_option("--nmax", spdc_flags.n_max, "Pair-number truncation")->capture_default_str();

  SpdcFlags pair_flags;
  auto* pair_cmd = app.add_subcommand("pair-stats", "Pair-number distribution of the source");
  pair_cmd->add_option("--tanh-xi", pair_flags.tanh_xi, "tanh|xi| in [0, 1)")->capture_default_str();
  pair_cmd->add_option("--nmax", pair_flags.n_max, "Pair-number truncation")->capture_default_str();

  auto* attack_cmd =
      app.add_subcommand("attack-report", "QBER and Holevo leak of the split four-photon state");

  SweepFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "Leak and bound over the four-photon fraction p");
  sweep_cmd->add_option("--p-min", sweep_flags.p_min)->capture_default_str();
  sweep_cmd->add_option("--p-max", sweep_flags.p_max)->capture_default_str();
  sweep_cmd->add_option("--steps", sweep_flags.steps)->capture_default_str();
  sweep_cmd->add_option("--out", sweep_flags.out_path, "CSV output path");

  SessionFlags sim_flags;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo protocol session");
  sim_cmd->add_option("--config", sim_flags.config_path, "JSON session config")->required();
  sim_cmd->add_option("--transcript", sim_flags.transcript_path, "Round transcript output path");

  SessionFlags replay_flags;
  auto* replay_cmd = app.add_subcommand("replay", "Rebuild a session report from its transcript");
  replay_cmd->add_option("--config", replay_flags.config_path, "JSON session config")->required();
  replay_cmd->add_option("--transcript", replay_flags.transcript_path, "Transcript to read")
      ->required();

  for (auto* sub : {spdc_cmd, pair_cmd, attack_cmd, sweep_cmd, sim_cmd, replay_cmd}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "fockqkd: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (spdc_cmd->parsed()) {
      cmd_spdc_state(spdc_flags, global, out);
    } else if (pair_cmd->parsed()) {
      cmd_pair_stats(pair_flags, global, out);
    } else if (attack_cmd->parsed()) {
      cmd_attack_report(global, out);
    } else if (sweep_cmd->parsed()) {
      cmd_sweep(sweep_flags, global, out);
    } else if (sim_cmd->parsed()) {
      cmd_simulate(sim_flags, global, out);
    } else if (replay_cmd->parsed()) {
      return cmd_replay(replay_flags, global, out, err);
    }
  } catch (const UsageError& e) {
    err << "fockqkd: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "fockqkd: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "fockqkd: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace fockqkd
