#include <gtest/gtest.h>

#include "fockqkd/attack.h"
#include "fockqkd/spdc.h"
#include "test_support.h"

using namespace fockqkd;
using fockqkd::testing::max_amplitude_diff;

namespace {

// Occupation over AH AV BH BV E1H E1V E2H E2V.
StateVector attack_basis_state(Occupation occupation) {
  return StateVector::from_terms(attack_registry(), {{occupation, 1.0}});
}

}  // namespace

TEST(AttackRegistry, LayoutAndEveChannels) {
  const auto registry = attack_registry();
  ASSERT_EQ(registry->size(), 8u);
  EXPECT_EQ(registry->index_of(kEveAliceChannel.h()), 4u);
  EXPECT_EQ(registry->index_of(kEveBobChannel.v()), 7u);
  EXPECT_EQ(eve_channel_for(kAliceChannel), kEveAliceChannel);
  EXPECT_EQ(eve_channel_for(kBobChannel), kEveBobChannel);
  EXPECT_THROW(eve_channel_for(kEveAliceChannel), std::invalid_argument);
}

TEST(AttackFourPhoton, ClosedFormWeights) {
  const auto state = attack_four_photon(attack_registry());
  const double w = 1 / (2 * std::sqrt(3.0));
  EXPECT_NEAR(state.norm_squared(), 1.0, 1e-15);
  EXPECT_EQ(state.term_count(), 6u);
  // |HV>_AB |HV>_E and |HV>_AB |VH>_E
  EXPECT_NEAR(state.amplitude(Occupation{1, 0, 0, 1, 1, 0, 0, 1}).real(), 2 * w, 1e-15);
  EXPECT_NEAR(state.amplitude(Occupation{1, 0, 0, 1, 0, 1, 1, 0}).real(), -w, 1e-15);
  EXPECT_NEAR(state.amplitude(Occupation{0, 1, 1, 0, 0, 1, 1, 0}).real(), 2 * w, 1e-15);
  EXPECT_NEAR(state.amplitude(Occupation{0, 1, 1, 0, 1, 0, 0, 1}).real(), -w, 1e-15);
  EXPECT_NEAR(state.amplitude(Occupation{1, 0, 1, 0, 0, 1, 0, 1}).real(), -w, 1e-15);
  EXPECT_NEAR(state.amplitude(Occupation{0, 1, 0, 1, 1, 0, 1, 0}).real(), -w, 1e-15);
}

TEST(SplitChannel, PipelineReproducesClosedForm) {
  RandomStream rng(1);
  const auto psi4 = four_photon_component(attack_registry());
  const auto alice = split_channel(psi4, kAliceChannel, AttackConfig{}, rng);
  ASSERT_TRUE(alice.success);
  EXPECT_EQ(alice.attempts, 1);
  EXPECT_NEAR(alice.success_probability, 0.5, 1e-15);
  const auto bob = split_channel(alice.post_state, kBobChannel, AttackConfig{}, rng);
  ASSERT_TRUE(bob.success);
  EXPECT_NEAR(bob.success_probability, 0.5, 1e-15);
  EXPECT_LT(max_amplitude_diff(bob.post_state, attack_four_photon(attack_registry())), 1e-12);
}

TEST(SplitChannel, HalfSuccessForEitherPhotonPair) {
  RandomStream rng(2);
  // Two H photons, and one H with one V.
  for (const auto& occupation : {Occupation{2, 0, 0, 0, 0, 0, 0, 0}, Occupation{1, 1, 0, 0, 0, 0, 0, 0}}) {
    const auto result = split_channel(attack_basis_state(occupation), kAliceChannel, AttackConfig{}, rng);
    EXPECT_NEAR(result.success_probability, 0.5, 1e-15);
    for (const auto& [occ, amp] : result.post_state.terms()) {
      EXPECT_EQ(occ[0] + occ[1], 1);
      EXPECT_EQ(occ[4] + occ[5], 1);
    }
  }
  // |HH> splits into |H>|H>, |HV> into (|H>|V> + |V>|H>)/sqrt2.
  const auto hv = split_channel(attack_basis_state({1, 1, 0, 0, 0, 0, 0, 0}), kAliceChannel,
                                AttackConfig{}, rng);
  EXPECT_NEAR(hv.post_state.amplitude(Occupation{1, 0, 0, 0, 0, 1, 0, 0}).real(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(hv.post_state.amplitude(Occupation{0, 1, 0, 0, 1, 0, 0, 0}).real(), std::sqrt(0.5), 1e-15);
}

TEST(SplitChannel, Preconditions) {
  RandomStream rng(3);
  EXPECT_THROW(split_channel(attack_basis_state({1, 0, 0, 0, 0, 0, 0, 0}), kAliceChannel,
                             AttackConfig{}, rng),
               std::invalid_argument);
  AttackConfig bad;
  bad.max_attempts = 0;
  EXPECT_THROW(split_channel(attack_basis_state({2, 0, 0, 0, 0, 0, 0, 0}), kAliceChannel, bad, rng),
               std::invalid_argument);
  // Eve's channel must be empty.
  EXPECT_THROW(split_channel(attack_basis_state({2, 0, 0, 0, 1, 0, 0, 0}), kAliceChannel,
                             AttackConfig{}, rng),
               std::invalid_argument);
}

TEST(SplitChannel, MonteCarloAttemptsAreGeometric) {
  AttackConfig config;
  config.mode = AttackMode::kMonteCarlo;
  const auto input = attack_basis_state({2, 0, 0, 0, 0, 0, 0, 0});
  RandomStream rng(4);
  const int trials = 4000;
  long total_attempts = 0;
  for (int i = 0; i < trials; ++i) {
    const auto result = split_channel(input, kAliceChannel, config, rng);
    ASSERT_TRUE(result.success);
    total_attempts += result.attempts;
  }
  // Mean of a geometric(1/2) is 2 with standard deviation sqrt(2) per trial.
  EXPECT_NEAR(static_cast<double>(total_attempts) / trials, 2.0, 4 * std::sqrt(2.0 / trials));

  config.max_attempts = 1;
  int failures = 0;
  for (int i = 0; i < 400; ++i) {
    const auto result = split_channel(input, kAliceChannel, config, rng);
    if (!result.success) {
      ++failures;
      EXPECT_EQ(result.attempts, 1);
      EXPECT_LT(max_amplitude_diff(result.post_state, input), 1e-15);
    }
  }
  EXPECT_GT(failures, 140);
  EXPECT_LT(failures, 260);
}

TEST(PhotonSplittingAttack, GatesOnTwoPhotonsPerChannel) {
  RandomStream rng(5);
  SpdcParams params;
  params.tanh_xi = 0.6;
  params.n_max = 3;
  const auto xi = spdc_state(params, attack_registry());
  int split = 0;
  for (int i = 0; i < 300; ++i) {
    const auto result = photon_splitting_attack(xi, AttackConfig{}, rng);
    EXPECT_EQ(result.alice_count, result.bob_count);
    EXPECT_EQ(result.split_attempted, result.alice_count == 2);
    if (result.split_attempted) {
      ++split;
      EXPECT_TRUE(result.split_succeeded);
      EXPECT_LT(max_amplitude_diff(result.state, attack_four_photon(attack_registry())), 1e-12);
    } else {
      for (const auto& [occ, amp] : result.state.terms()) {
        EXPECT_EQ(occ[0] + occ[1], result.alice_count);
        EXPECT_EQ(occ[4] + occ[5] + occ[6] + occ[7], 0);
      }
    }
  }
  EXPECT_GT(split, 0);
}

TEST(InterceptResend, ResendsOnePhotonInEveBasis) {
  RandomStream rng(6);
  const auto singlet = singlet_state(attack_registry());
  for (int i = 0; i < 50; ++i) {
    const auto out = intercept_resend(singlet, kBobChannel, BasisAngle::hv(), rng);
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
    // Eve's H/V reading collapses Alice to the opposite polarization: a product state.
    ASSERT_EQ(out.term_count(), 1u);
    const auto& occ = out.terms()[0].first;
    EXPECT_EQ(occ[2] + occ[3], 1);
    EXPECT_EQ(occ[0], occ[3]);
  }
  EXPECT_THROW(intercept_resend(attack_basis_state({0, 0, 2, 0, 0, 0, 0, 0}), kBobChannel,
                                BasisAngle::hv(), rng),
               std::invalid_argument);
  const auto vac = StateVector::vacuum(attack_registry());
  EXPECT_EQ(intercept_resend(vac, kBobChannel, BasisAngle::da(), rng).term_count(), 1u);
}
