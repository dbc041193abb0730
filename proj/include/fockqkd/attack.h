#pragma once

#include "fockqkd/fock_state.h"
#include "fockqkd/optics.h"
#include "fockqkd/rng.h"
#include "fockqkd/spdc.h"

namespace fockqkd {

// Eve's storage channels: E1 taps Alice's line, E2 taps Bob's.
inline constexpr Channel kEveAliceChannel{Party::kE1, 0};
inline constexpr Channel kEveBobChannel{Party::kE2, 0};

// Source modes followed by E1H, E1V, E2H, E2V.
RegistryPtr attack_registry();

// E1 for Alice's channel, E2 for Bob's.
Channel eve_channel_for(Channel channel);

enum class AttackMode { kAnalytic, kMonteCarlo };

struct AttackConfig {
  int max_attempts = 20;
  AttackMode mode = AttackMode::kAnalytic;

  void validate() const;
};

struct SplitResult {
  bool success = false;
  int attempts = 0;
  // On success every term holds exactly one photon in the original channel and one
  // in Eve's. On failure this is the unsplit input.
  StateVector post_state;
  // Per-attempt probability that exactly one photon is deflected.
  double success_probability = 0.0;
};

// Repeat-until-success splitting: symmetric beam splitter into Eve's empty channel,
// QND count of the deflected photons, keep the one-photon branch. A failed attempt
// returns both photons to the channel and restores the pre-attempt state.
// Requires exactly two photons in `channel` in every term.
SplitResult split_channel(const StateVector& state, Channel channel, Channel eve,
                          const AttackConfig& config, RandomStream& rng);
SplitResult split_channel(const StateVector& state, Channel channel, const AttackConfig& config,
                          RandomStream& rng);

// Joint Alice/Bob/Eve state after both channels of the four-photon component were
// split, written out in closed form over `registry` (which must contain the source
// and both Eve channels):
//   1/(2 sqrt 3) [ |HV>_AB (2|HV>_E - |VH>_E) + |VH>_AB (2|VH>_E - |HV>_E)
//                  - |HH>_AB |VV>_E - |VV>_AB |HH>_E ]
StateVector attack_four_photon(RegistryPtr registry);

struct GatedAttackResult {
  StateVector state;
  int alice_count = 0;
  int bob_count = 0;
  bool split_attempted = false;
  // False when a Monte Carlo split ran out of attempts; the round then carries the
  // unsplit remainder.
  bool split_succeeded = false;
};

// QND-counts both channels and splits them only when each carries exactly two
// photons; every other photon-number component passes through untouched.
GatedAttackResult photon_splitting_attack(const StateVector& state, const AttackConfig& config,
                                          RandomStream& rng);

// Eve measures `channel` in `eve_basis` and re-sends a single photon in the observed
// polarization eigenstate (nothing on a no-click). Requires at most one photon in
// the channel in every term.
StateVector intercept_resend(const StateVector& state, Channel channel, BasisAngle eve_basis,
                             RandomStream& rng);

}  // namespace fockqkd
