#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fockqkd {

// Upper bound on the number of optical modes a single state may span.
inline constexpr std::size_t kMaxModes = 16;

enum class Party : std::uint8_t { kA, kB, kE1, kE2, kE3, kE4 };

// P0/P1 are H/V in the reference (rectilinear) frame.
enum class Polarization : std::uint8_t { kP0, kP1 };

struct ModeLabel {
  Party party = Party::kA;
  std::uint8_t channel = 0;
  Polarization polarization = Polarization::kP0;

  friend auto operator<=>(const ModeLabel&, const ModeLabel&) = default;
};

// A spatial channel: the pair of polarization modes owned by one party.
struct Channel {
  Party party = Party::kA;
  std::uint8_t index = 0;

  ModeLabel mode(Polarization pol) const { return {party, index, pol}; }
  ModeLabel h() const { return mode(Polarization::kP0); }
  ModeLabel v() const { return mode(Polarization::kP1); }

  friend auto operator<=>(const Channel&, const Channel&) = default;
};

std::string to_string(Party party);
std::string to_string(Channel channel);
// "AH", "BV", "E1H"; a non-zero channel index is inserted before the polarization ("A2H").
std::string to_string(const ModeLabel& label);

// Ordered catalog of modes. Indices are stable; new modes are only appended.
class ModeRegistry {
 public:
  ModeRegistry() = default;
  explicit ModeRegistry(std::vector<ModeLabel> modes);

  std::size_t size() const { return modes_.size(); }
  const ModeLabel& label(std::size_t index) const { return modes_.at(index); }
  const std::vector<ModeLabel>& labels() const { return modes_; }

  std::optional<std::size_t> find(const ModeLabel& label) const;
  // Throws std::invalid_argument naming the label when it is not registered.
  std::size_t index_of(const ModeLabel& label) const;
  bool contains(const ModeLabel& label) const { return find(label).has_value(); }

  ModeRegistry with_mode(const ModeLabel& label) const;

  friend bool operator==(const ModeRegistry&, const ModeRegistry&) = default;

 private:
  std::vector<ModeLabel> modes_;
};

}  // namespace fockqkd
