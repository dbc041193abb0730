#include "fockqkd/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockqkd/attack.h"
#include "fockqkd/spdc.h"

namespace fockqkd {

namespace {

struct Detector {
  std::size_t first;
  std::size_t second;

  DetectionKind classify(const Occupation& occupation) const {
    return classify_clicks(occupation[first], occupation[second]);
  }
};

Detector detector_for(const StateVector& rotated, Channel channel) {
  return {rotated.registry().index_of(channel.h()), rotated.registry().index_of(channel.v())};
}

// Probability of reading bit 0 and bit 1 from a click; a double click is split evenly.
std::array<double, 2> bit_weights(DetectionKind kind) {
  switch (kind) {
    case DetectionKind::kBit0:
      return {1.0, 0.0};
    case DetectionKind::kBit1:
      return {0.0, 1.0};
    case DetectionKind::kDoubleClick:
      return {0.5, 0.5};
    case DetectionKind::kNoClick:
      break;
  }
  return {0.0, 0.0};
}

struct JointBits {
  std::array<std::array<double, 2>, 2> joint{};  // unnormalized, both clicked
  double total = 0.0;                            // squared norm of the input
};

JointBits joint_bits(const StateVector& state, Channel first, BasisAngle first_basis,
                     Channel second, BasisAngle second_basis) {
  const StateVector rotated =
      rotate_polarization(rotate_polarization(state, first, first_basis), second, second_basis);
  const Detector d1 = detector_for(rotated, first);
  const Detector d2 = detector_for(rotated, second);
  JointBits out;
  for (const auto& [occupation, amplitude] : rotated.terms()) {
    const double w = std::norm(amplitude);
    out.total += w;
    const auto b1 = bit_weights(d1.classify(occupation));
    const auto b2 = bit_weights(d2.classify(occupation));
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        out.joint[x][y] += w * b1[x] * b2[y];
      }
    }
  }
  return out;
}

}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("binary entropy argument must lie in [0, 1], got " +
                                std::to_string(x));
  }
  if (x == 0.0 || x == 1.0) {
    return 0.0;
  }
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double holevo_binary(Amplitude overlap) {
  const double magnitude = std::abs(overlap);
  if (magnitude > 1.0 + 1e-12) {
    throw std::invalid_argument("overlap magnitude exceeds 1: " + std::to_string(magnitude));
  }
  return binary_entropy((1.0 - std::min(magnitude, 1.0)) / 2.0);
}

QberReport qber_from_state(const StateVector& state, BasisAngle alice_basis,
                           BasisAngle bob_basis) {
  const JointBits bits = joint_bits(state, kAliceChannel, alice_basis, kBobChannel, bob_basis);
  QberReport report;
  if (!(bits.total > 0.0)) {
    return report;
  }
  double sifted = 0.0;
  for (const auto& row : bits.joint) {
    sifted += row[0] + row[1];
  }
  report.sift_probability = sifted / bits.total;
  if (sifted > 0.0) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        report.joint[a][b] = bits.joint[a][b] / sifted;
      }
    }
    report.qber = report.joint[0][0] + report.joint[1][1];
  }
  return report;
}

std::map<BitPair, ConditionalState> eve_conditional_states(const StateVector& state,
                                                           BasisAngle alice_basis,
                                                           BasisAngle bob_basis) {
  const StateVector rotated = rotate_polarization(
      rotate_polarization(state, kAliceChannel, alice_basis), kBobChannel, bob_basis);
  const Detector alice = detector_for(rotated, kAliceChannel);
  const Detector bob = detector_for(rotated, kBobChannel);
  const double total = rotated.norm_squared();
  if (!(total > 0.0)) {
    throw std::domain_error("cannot condition the zero state");
  }

  struct Branch {
    std::array<int, 4> counts{};
    std::vector<Term> terms;
    double weight = 0.0;
  };
  std::map<BitPair, Branch> branches;
  for (const auto& [occupation, amplitude] : rotated.terms()) {
    const DetectionKind a = alice.classify(occupation);
    const DetectionKind b = bob.classify(occupation);
    const bool single_a = a == DetectionKind::kBit0 || a == DetectionKind::kBit1;
    const bool single_b = b == DetectionKind::kBit0 || b == DetectionKind::kBit1;
    if (!single_a || !single_b) {
      continue;
    }
    const BitPair key{a == DetectionKind::kBit1, b == DetectionKind::kBit1};
    const std::array<int, 4> counts = {occupation[alice.first], occupation[alice.second],
                                       occupation[bob.first], occupation[bob.second]};
    Branch& branch = branches[key];
    if (branch.terms.empty()) {
      branch.counts = counts;
    } else if (branch.counts != counts) {
      throw std::domain_error("click outcome (" + std::to_string(key.first) + "," +
                              std::to_string(key.second) +
                              ") mixes several photon-number configurations");
    }
    Occupation emptied = occupation;
    emptied[alice.first] = 0;
    emptied[alice.second] = 0;
    emptied[bob.first] = 0;
    emptied[bob.second] = 0;
    branch.terms.emplace_back(emptied, amplitude);
    branch.weight += std::norm(amplitude);
  }

  std::map<BitPair, ConditionalState> out;
  for (auto& [key, branch] : branches) {
    StateVector eve = rotated.with_terms(std::move(branch.terms)).with_discarded_mass(0.0);
    out.emplace(key, ConditionalState{branch.weight / total, eve.normalized()});
  }
  return out;
}

KeyRoundLeak key_round_holevo(const StateVector& state, BasisAngle basis) {
  const auto conditional = eve_conditional_states(state, basis, basis);
  const auto first = conditional.find({0, 1});
  const auto second = conditional.find({1, 0});
  if (first == conditional.end() || second == conditional.end()) {
    throw std::domain_error("state has no weight on one of the key outcomes");
  }
  KeyRoundLeak leak;
  leak.overlap = inner_product(first->second.eve_state, second->second.eve_state);
  leak.chi = holevo_binary(leak.overlap);
  return leak;
}

double four_photon_eve_information() {
  const StateVector split = attack_four_photon(attack_registry());
  return key_round_holevo(split, BasisAngle::hv()).chi;
}

LeakBound leak_vs_bound(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("four-photon fraction p must lie in [0, 1], got " +
                                std::to_string(p));
  }
  static const double kEveInfo = four_photon_eve_information();
  LeakBound out;
  out.eve_info = p * kEveInfo;
  out.bound = binary_entropy(p / 6.0);
  out.margin = out.bound - out.eve_info;
  return out;
}

Correlation eve_alice_correlation(const StateVector& state, BasisAngle alice_basis,
                                  Channel eve_channel, BasisAngle eve_basis) {
  const JointBits bits = joint_bits(state, kAliceChannel, alice_basis, eve_channel, eve_basis);
  double mass = 0.0;
  for (const auto& row : bits.joint) {
    mass += row[0] + row[1];
  }
  if (!(mass > 1e-15)) {
    return {0.0, CorrelationStatus::kNoJointClicks};
  }
  const double ex = (bits.joint[1][0] + bits.joint[1][1]) / mass;
  const double ey = (bits.joint[0][1] + bits.joint[1][1]) / mass;
  const double exy = bits.joint[1][1] / mass;
  const double var_x = ex * (1.0 - ex);
  const double var_y = ey * (1.0 - ey);
  constexpr double kTiny = 1e-15;
  if (var_x < kTiny || var_y < kTiny) {
    if (var_x < kTiny && var_y < kTiny) {
      const bool equal = std::lround(ex) == std::lround(ey);
      return {equal ? 1.0 : -1.0, CorrelationStatus::kDegenerate};
    }
    return {0.0, CorrelationStatus::kDegenerate};
  }
  return {(exy - ex * ey) / std::sqrt(var_x * var_y), CorrelationStatus::kRegular};
}

Correlation eve_wrong_basis_correlation(const StateVector& state) {
  return eve_alice_correlation(state, BasisAngle::hv(), kEveAliceChannel, BasisAngle::da());
}

}  // namespace fockqkd
