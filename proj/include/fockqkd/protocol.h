#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fockqkd/attack.h"
#include "fockqkd/metrics.h"
#include "fockqkd/optics.h"
#include "fockqkd/spdc.h"
#include "fockqkd/transcript.h"

namespace fockqkd {

enum class SourceKind { kSinglet, kSpdc, kAttackMixture };

struct SourceConfig {
  SourceKind kind = SourceKind::kSinglet;
  SpdcParams spdc;                 // kSpdc
  double attack_fraction = 0.0;    // kAttackMixture: probability p of a split four-photon event
};

enum class EveKind { kNone, kSplitAttack, kInterceptResend };

struct EveConfig {
  EveKind kind = EveKind::kNone;
  AttackConfig attack;                        // kSplitAttack
  std::optional<BasisAngle> intercept_basis;  // kInterceptResend; empty = random per round
};

enum class DoubleClickPolicy { kKeep, kDiscard };

struct SessionConfig {
  std::uint64_t rounds = 1;
  SourceConfig source;
  EveConfig eve;
  std::uint64_t seed = 0;
  std::vector<BasisAngle> basis_set = {BasisAngle::hv(), BasisAngle::da()};
  DoubleClickPolicy double_click_policy = DoubleClickPolicy::kKeep;
  // 0 picks the hardware concurrency. Results do not depend on this value.
  unsigned threads = 0;

  // Throws std::invalid_argument with the offending field name.
  void validate() const;
  std::vector<std::string> basis_names() const;
};

struct BasisBreakdown {
  std::string basis;
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  double qber = 0.0;

  friend bool operator==(const BasisBreakdown&, const BasisBreakdown&) = default;
};

struct SessionReport {
  std::uint64_t rounds = 0;
  std::uint64_t sifted_length = 0;
  std::uint64_t error_count = 0;
  double qber_hat = 0.0;
  double qber_half_width = 0.0;  // 95% normal-approximation interval
  // Detection events summed over Alice and Bob.
  std::uint64_t double_click_count = 0;
  std::uint64_t no_click_count = 0;
  std::uint64_t attack_rounds = 0;   // rounds that carried a split four-photon state
  std::uint64_t split_failures = 0;
  // eve_info: plug-in mutual information (bits per sifted bit) between Alice's bit
  // and Eve's correct-basis reading of her stored photons; bound: h(qber_hat).
  LeakBound leak_bound;
  double eve_info_sigma = 0.0;
  std::vector<BasisBreakdown> per_basis;

  friend bool operator==(const SessionReport&, const SessionReport&) = default;
};

// Integer counts accumulated over rounds; merging is order independent.
class SessionTally {
 public:
  explicit SessionTally(std::size_t basis_count);

  void add(const RoundRecord& record);
  void merge(const SessionTally& other);
  SessionReport report(const std::vector<std::string>& basis_names) const;

 private:
  std::uint64_t rounds_ = 0;
  std::vector<std::uint64_t> sifted_;
  std::vector<std::uint64_t> errors_;
  std::uint64_t double_clicks_ = 0;
  std::uint64_t no_clicks_ = 0;
  std::uint64_t attack_rounds_ = 0;
  std::uint64_t split_failures_ = 0;
  // (Alice bit, Eve observation code) -> count over sifted rounds.
  std::map<std::pair<int, int>, std::uint64_t> eve_joint_;
};

struct MutualInformation {
  double bits = 0.0;
  double sigma = 0.0;  // delta-method standard error
};

// Plug-in estimate from a contingency table of counts.
MutualInformation estimate_mutual_information(
    const std::map<std::pair<int, int>, std::uint64_t>& counts);

class SessionSimulator {
 public:
  explicit SessionSimulator(SessionConfig config);

  const SessionConfig& config() const { return config_; }

  // Deterministic in (seed, round_idx) alone.
  RoundRecord simulate_round(std::uint64_t round_idx) const;

  // Streams the transcript when `transcript` is non-null.
  SessionReport run(std::ostream* transcript = nullptr) const;

 private:
  SessionConfig config_;
  StateVector singlet_;
  StateVector attack_state_;
  StateVector spdc_;
};

SessionReport run_session(const SessionConfig& config, std::ostream* transcript = nullptr);

struct ReplayResult {
  SessionReport report;
  bool checksum_ok = false;
  std::string recorded_checksum;
  std::string computed_checksum;
};

// Rebuilds the report from a transcript. Structural damage throws TranscriptError
// with the line number; edited records surface as checksum_ok == false.
ReplayResult replay(const SessionConfig& config, std::istream& transcript);
ReplayResult replay(const SessionConfig& config, const std::filesystem::path& transcript_path);

}  // namespace fockqkd
