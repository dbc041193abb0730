#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fockqkd/fock_state.h"
#include "fockqkd/rng.h"

namespace fockqkd {

// Polarization measurement basis. The basis at angle theta has first-detector mode
//   a0' = cos(theta) aH + sin(theta) aV   and second-detector mode
//   a1' = -sin(theta) aH + cos(theta) aV,
// so theta = pi/4 is the diagonal (D/A) basis.
class BasisAngle {
 public:
  BasisAngle() = default;
  // Throws std::invalid_argument unless theta is in [0, pi).
  explicit BasisAngle(double theta);

  static BasisAngle hv() { return BasisAngle(); }
  static BasisAngle da();

  double theta() const { return theta_; }
  bool is_hv() const { return theta_ == 0.0; }
  bool is_da() const;
  // "HV", "DA", or the angle in radians.
  std::string name() const;

  friend bool operator==(const BasisAngle&, const BasisAngle&) = default;

 private:
  double theta_ = 0.0;
};

// Parses "HV", "DA" or a decimal angle in radians.
BasisAngle parse_basis(const std::string& text);

enum class DetectionKind : std::uint8_t { kNoClick, kBit0, kBit1, kDoubleClick };

struct DetectionOutcome {
  DetectionKind kind = DetectionKind::kNoClick;
  // Present for Bit0/Bit1 and, after random assignment, for DoubleClick.
  std::optional<std::uint8_t> assigned_bit;

  bool clicked() const { return kind != DetectionKind::kNoClick; }
  friend bool operator==(const DetectionOutcome&, const DetectionOutcome&) = default;
};

DetectionKind classify_clicks(int first_detector_photons, int second_detector_photons);
char to_char(DetectionKind kind);

// Substitution a+_from -> (a+_from + a+_to)/sqrt(2). `to` must be empty in every term.
StateVector beamsplitter_50_50(const StateVector& state, const ModeLabel& from,
                               const ModeLabel& to);

// Re-expresses the channel in the basis at `basis`: afterwards the channel's P0/P1
// modes hold the a0'/a1' occupations. Norm preserving.
StateVector rotate_polarization(const StateVector& state, Channel channel, BasisAngle basis);
// Unrestricted angle; rotate_polarization_radians(s, c, -t) undoes a rotation by t.
StateVector rotate_polarization_radians(const StateVector& state, Channel channel, double theta);

struct CountOutcome {
  int count = 0;
  double probability = 0.0;
  StateVector post_state;
};

// Projective measurement of the total photon number over `modes`; outcomes are
// returned in increasing count order. Throws std::invalid_argument on an empty set.
std::vector<CountOutcome> qnd_count(const StateVector& state, std::span<const ModeLabel> modes);

struct Detection {
  DetectionOutcome outcome;
  // Conditional state of the remaining modes; the detected channel is left empty.
  StateVector post_state;
};

// Polarizing beam splitter in `basis` followed by two threshold detectors.
Detection threshold_detect(const StateVector& state, Channel channel, BasisAngle basis,
                           RandomStream& rng);

// Applies the creation operator of detector mode `bit` of `basis` on `channel`.
StateVector create_polarized(const StateVector& state, Channel channel, BasisAngle basis, int bit);

}  // namespace fockqkd
