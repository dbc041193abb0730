#include "fockqkd/attack.h"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fockqkd {

namespace {

std::array<std::size_t, 2> channel_indices(const ModeRegistry& registry, Channel channel) {
  return {registry.index_of(channel.h()), registry.index_of(channel.v())};
}

// Samples one outcome of a QND count with probabilities relative to the state norm.
const CountOutcome& sample_count(const std::vector<CountOutcome>& outcomes, RandomStream& rng) {
  double total = 0.0;
  for (const auto& outcome : outcomes) {
    total += outcome.probability;
  }
  const double draw = rng.uniform() * total;
  double cumulative = 0.0;
  for (const auto& outcome : outcomes) {
    cumulative += outcome.probability;
    if (draw < cumulative) {
      return outcome;
    }
  }
  return outcomes.back();
}

// 'H' / 'V' occupy one photon in the channel's P0 / P1 mode.
void place(Occupation& occupation, const ModeRegistry& registry, Channel channel, char pol) {
  occupation[registry.index_of(pol == 'H' ? channel.h() : channel.v())] += 1;
}

}  // namespace

RegistryPtr attack_registry() {
  return make_registry({kAliceChannel.h(), kAliceChannel.v(), kBobChannel.h(), kBobChannel.v(),
                        kEveAliceChannel.h(), kEveAliceChannel.v(), kEveBobChannel.h(),
                        kEveBobChannel.v()});
}

Channel eve_channel_for(Channel channel) {
  if (channel == kAliceChannel) {
    return kEveAliceChannel;
  }
  if (channel == kBobChannel) {
    return kEveBobChannel;
  }
  throw std::invalid_argument("no Eve channel is paired with " + to_string(channel));
}

void AttackConfig::validate() const {
  if (max_attempts < 1) {
    throw std::invalid_argument("max_attempts must be at least 1");
  }
}

SplitResult split_channel(const StateVector& state, Channel channel, Channel eve,
                          const AttackConfig& config, RandomStream& rng) {
  config.validate();
  const auto source = channel_indices(state.registry(), channel);
  for (const auto& term : state.terms()) {
    if (term.first[source[0]] + term.first[source[1]] != 2) {
      throw std::invalid_argument("splitting requires exactly two photons in channel " +
                                  to_string(channel) + " in every term");
    }
  }
  const double input_norm = state.norm_squared();
  if (!(input_norm > 0.0)) {
    throw std::domain_error("cannot split the zero state");
  }

  StateVector split = beamsplitter_50_50(state, channel.h(), eve.h());
  split = beamsplitter_50_50(split, channel.v(), eve.v());
  const std::array<ModeLabel, 2> deflected = {eve.h(), eve.v()};

  SplitResult result;
  result.post_state = state;
  for (auto& outcome : qnd_count(split, deflected)) {
    if (outcome.count == 1) {
      result.success_probability = outcome.probability / input_norm;
      result.post_state = std::move(outcome.post_state);
    }
  }
  if (result.success_probability == 0.0) {
    throw std::logic_error("one-photon deflection branch is empty");
  }

  if (config.mode == AttackMode::kAnalytic) {
    result.success = true;
    result.attempts = 1;
    return result;
  }
  for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
    if (rng.uniform() < result.success_probability) {
      result.success = true;
      result.attempts = attempt;
      return result;
    }
  }
  result.success = false;
  result.attempts = config.max_attempts;
  result.post_state = state;
  return result;
}

SplitResult split_channel(const StateVector& state, Channel channel, const AttackConfig& config,
                          RandomStream& rng) {
  return split_channel(state, channel, eve_channel_for(channel), config, rng);
}

StateVector attack_four_photon(RegistryPtr registry) {
  struct Component {
    const char* ab;
    const char* e;
    double weight;
  };
  static constexpr std::array<Component, 6> kComponents = {{
      {"HV", "HV", 2.0},
      {"HV", "VH", -1.0},
      {"VH", "VH", 2.0},
      {"VH", "HV", -1.0},
      {"HH", "VV", -1.0},
      {"VV", "HH", -1.0},
  }};
  const double scale = 1.0 / (2.0 * std::sqrt(3.0));
  std::vector<Term> terms;
  for (const auto& c : kComponents) {
    Occupation occupation(registry->size());
    place(occupation, *registry, kAliceChannel, c.ab[0]);
    place(occupation, *registry, kBobChannel, c.ab[1]);
    place(occupation, *registry, kEveAliceChannel, c.e[0]);
    place(occupation, *registry, kEveBobChannel, c.e[1]);
    terms.emplace_back(occupation, c.weight * scale);
  }
  return StateVector::from_terms(std::move(registry), std::move(terms));
}

GatedAttackResult photon_splitting_attack(const StateVector& state, const AttackConfig& config,
                                          RandomStream& rng) {
  config.validate();
  GatedAttackResult result{state};
  const std::array<ModeLabel, 2> alice = {kAliceChannel.h(), kAliceChannel.v()};
  const std::array<ModeLabel, 2> bob = {kBobChannel.h(), kBobChannel.v()};

  const auto alice_outcomes = qnd_count(state, alice);
  const CountOutcome& a = sample_count(alice_outcomes, rng);
  result.alice_count = a.count;
  const auto bob_outcomes = qnd_count(a.post_state, bob);
  const CountOutcome& b = sample_count(bob_outcomes, rng);
  result.bob_count = b.count;
  result.state = b.post_state;
  if (a.count != 2 || b.count != 2) {
    return result;
  }

  result.split_attempted = true;
  const SplitResult alice_split = split_channel(result.state, kAliceChannel, config, rng);
  result.state = alice_split.post_state;
  if (!alice_split.success) {
    return result;
  }
  const SplitResult bob_split = split_channel(result.state, kBobChannel, config, rng);
  result.state = bob_split.post_state;
  result.split_succeeded = bob_split.success;
  return result;
}

StateVector intercept_resend(const StateVector& state, Channel channel, BasisAngle eve_basis,
                             RandomStream& rng) {
  const auto modes = channel_indices(state.registry(), channel);
  for (const auto& term : state.terms()) {
    if (term.first[modes[0]] + term.first[modes[1]] > 1) {
      throw std::invalid_argument("intercept-resend requires at most one photon in channel " +
                                  to_string(channel));
    }
  }
  const Detection detection = threshold_detect(state, channel, eve_basis, rng);
  if (!detection.outcome.clicked()) {
    return detection.post_state;
  }
  return create_polarized(detection.post_state, channel, eve_basis,
                          *detection.outcome.assigned_bit);
}

}  // namespace fockqkd
