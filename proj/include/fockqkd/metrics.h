#pragma once

#include <array>
#include <map>
#include <utility>

#include "fockqkd/fock_state.h"
#include "fockqkd/optics.h"

namespace fockqkd {

// h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0.
double binary_entropy(double x);

// Holevo quantity of two equiprobable pure states with overlap c: h((1-|c|)/2).
double holevo_binary(Amplitude overlap);

struct QberReport {
  double qber = 0.0;
  // Probability that both parties register a click.
  double sift_probability = 0.0;
  // joint[a][b]: Alice measured bit a and Bob measured bit b, conditioned on both
  // clicking. Bob's key bit is the complement of b, so a == b is an error.
  std::array<std::array<double, 2>, 2> joint{};
};

// Exact Born-rule QBER for threshold detection of Alice's and Bob's channels.
// A double click contributes half its weight to each bit value.
QberReport qber_from_state(const StateVector& state, BasisAngle alice_basis, BasisAngle bob_basis);

struct ConditionalState {
  double probability = 0.0;
  // Normalized state with Alice's and Bob's channels emptied.
  StateVector eve_state;
};

using BitPair = std::pair<int, int>;

// For every single-click outcome (Alice bit, Bob bit) the probability and Eve's
// conditional state. Throws std::domain_error if an outcome leaves Eve in a mixed
// state (several photon-number configurations behind the same clicks).
std::map<BitPair, ConditionalState> eve_conditional_states(const StateVector& state,
                                                           BasisAngle alice_basis,
                                                           BasisAngle bob_basis);

struct KeyRoundLeak {
  Amplitude overlap;  // <eve|(0,1)> , <eve|(1,0)>
  double chi = 0.0;   // with equal priors
};

// Overlap of Eve's states for the two key outcomes (0,1) and (1,0), both parties
// measuring in `basis`, and the resulting Holevo quantity.
KeyRoundLeak key_round_holevo(const StateVector& state, BasisAngle basis);

struct LeakBound {
  double eve_info = 0.0;  // bits per channel use
  double bound = 0.0;     // h(Q)
  double margin = 0.0;    // bound - eve_info

  friend bool operator==(const LeakBound&, const LeakBound&) = default;
};

// Eve's information on the key rounds of the split four-photon state: h(1/10).
double four_photon_eve_information();

// Four-photon events with probability p: eve_info = p h(1/10), bound = h(p/6).
LeakBound leak_vs_bound(double p);

enum class CorrelationStatus {
  kRegular,
  // At least one bit is constant; value is +-1 if both are constant, 0 otherwise.
  kDegenerate,
  // The two parties never click together; value is 0.
  kNoJointClicks,
};

struct Correlation {
  double value = 0.0;
  CorrelationStatus status = CorrelationStatus::kRegular;
};

// Pearson correlation between Alice's bit and the bit Eve reads from `eve_channel`,
// from the exact joint distribution given both click.
Correlation eve_alice_correlation(const StateVector& state, BasisAngle alice_basis,
                                  Channel eve_channel, BasisAngle eve_basis);

// Alice in H/V, Eve reading her Alice-side channel in D/A.
Correlation eve_wrong_basis_correlation(const StateVector& state);

}  // namespace fockqkd
