#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fockqkd/optics.h"

namespace fockqkd {

enum class SourceTag : std::uint8_t {
  kSinglet,
  kAttack,          // split four-photon state from an attack-mixture source
  kSpdc,            // SPDC emission, no splitting
  kSpdcSplit,       // SPDC emission split by Eve on both channels
  kSpdcSplitFailed  // splitting ran out of attempts
};

std::string to_string(SourceTag tag);
std::optional<SourceTag> parse_source_tag(std::string_view text);

struct EveObservation {
  bool measured = false;
  DetectionKind alice_side = DetectionKind::kNoClick;  // E1
  DetectionKind bob_side = DetectionKind::kNoClick;    // E2

  int code() const { return static_cast<int>(alice_side) * 4 + static_cast<int>(bob_side); }
  friend bool operator==(const EveObservation&, const EveObservation&) = default;
};

// One protocol round. Bits are -1 when the detector did not click; bob_bit is
// Bob's key bit (his measured bit flipped).
struct RoundRecord {
  std::uint64_t round_idx = 0;
  SourceTag source_tag = SourceTag::kSinglet;
  std::uint8_t alice_basis = 0;  // index into the session's basis set
  std::uint8_t bob_basis = 0;
  DetectionKind alice_outcome = DetectionKind::kNoClick;
  DetectionKind bob_outcome = DetectionKind::kNoClick;
  bool sifted = false;
  int alice_bit = -1;
  int bob_bit = -1;
  EveObservation eve;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

inline constexpr std::string_view kTranscriptHeader =
    "round_idx,source_tag,alice_basis,bob_basis,alice_outcome,bob_outcome,sifted_flag,"
    "alice_bit,bob_bit,eve_observation";

class Fnv1a64 {
 public:
  void update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash_ ^= c;
      hash_ *= 0x100000001B3ULL;
    }
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

std::string to_hex(std::uint64_t value);

// Line without the trailing newline; basis names come from the session's basis set.
std::string format_record(const RoundRecord& record, const std::vector<std::string>& basis_names);

class TranscriptError : public std::runtime_error {
 public:
  TranscriptError(std::size_t line, const std::string& message)
      : std::runtime_error("transcript line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Throws TranscriptError tagged with `line_number`.
RoundRecord parse_record(std::string_view line, std::size_t line_number,
                         const std::vector<std::string>& basis_names);

}  // namespace fockqkd
