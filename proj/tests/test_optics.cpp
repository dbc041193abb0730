#include <numbers>

#include <gtest/gtest.h>

#include "fockqkd/optics.h"
#include "fockqkd/spdc.h"
#include "test_support.h"

using namespace fockqkd;
using fockqkd::testing::max_amplitude_diff;
using fockqkd::testing::random_state;

namespace {

const double kHalfRoot2 = std::sqrt(0.5);

StateVector basis_state(Occupation occupation) {
  return StateVector::from_terms(source_registry(), {{occupation, 1.0}});
}

}  // namespace

TEST(BasisAngle, RangeAndParsing) {
  EXPECT_THROW(BasisAngle(-0.1), std::invalid_argument);
  EXPECT_THROW(BasisAngle(std::numbers::pi), std::invalid_argument);
  EXPECT_TRUE(parse_basis("HV").is_hv());
  EXPECT_TRUE(parse_basis("DA").is_da());
  EXPECT_DOUBLE_EQ(BasisAngle::da().theta(), std::numbers::pi / 4);
  EXPECT_DOUBLE_EQ(parse_basis("0.5").theta(), 0.5);
  EXPECT_EQ(BasisAngle(0.5).name(), "0.5");
  EXPECT_THROW(parse_basis("XY"), std::invalid_argument);
}

TEST(Detection, ClickClassification) {
  EXPECT_EQ(classify_clicks(0, 0), DetectionKind::kNoClick);
  EXPECT_EQ(classify_clicks(3, 0), DetectionKind::kBit0);
  EXPECT_EQ(classify_clicks(0, 1), DetectionKind::kBit1);
  EXPECT_EQ(classify_clicks(1, 2), DetectionKind::kDoubleClick);
  EXPECT_EQ(to_char(DetectionKind::kDoubleClick), 'D');
}

TEST(Rotation, HongOuMandel) {
  const auto out = rotate_polarization(basis_state({1, 1, 0, 0}), kAliceChannel, BasisAngle::da());
  const auto expected = StateVector::from_terms(
      source_registry(), {{Occupation{2, 0, 0, 0}, kHalfRoot2}, {Occupation{0, 2, 0, 0}, -kHalfRoot2}});
  EXPECT_LT(max_amplitude_diff(out, expected), 1e-15);
  EXPECT_EQ(out.term_count(), 2u);
}

TEST(Rotation, TwoHorizontalPhotonsInDiagonalBasis) {
  // (c a0+ - s a1+)^2 |0> / sqrt2 at c = s = 1/sqrt2
  const auto out = rotate_polarization(basis_state({2, 0, 0, 0}), kAliceChannel, BasisAngle::da());
  const auto expected = StateVector::from_terms(source_registry(),
                                                {{Occupation{2, 0, 0, 0}, 0.5},
                                                 {Occupation{1, 1, 0, 0}, -kHalfRoot2},
                                                 {Occupation{0, 2, 0, 0}, 0.5}});
  EXPECT_LT(max_amplitude_diff(out, expected), 1e-15);
}

TEST(Rotation, SinglePhotonAtArbitraryAngle) {
  const double theta = 0.3;
  const auto out = rotate_polarization(basis_state({0, 1, 0, 0}), kAliceChannel, BasisAngle(theta));
  // aV+ -> s a0'+ + c a1'+
  EXPECT_NEAR(out.amplitude(Occupation{1, 0, 0, 0}).real(), std::sin(theta), 1e-15);
  EXPECT_NEAR(out.amplitude(Occupation{0, 1, 0, 0}).real(), std::cos(theta), 1e-15);
}

TEST(Rotation, ZeroAngleIsIdentity) {
  RandomStream rng(5);
  const auto psi = random_state(source_registry(), rng, 10, 3);
  EXPECT_EQ(max_amplitude_diff(rotate_polarization(psi, kBobChannel, BasisAngle::hv()), psi), 0.0);
}

class RotationProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RotationProperties, UnitaryAndInvertible) {
  RandomStream rng(GetParam());
  const auto psi = random_state(source_registry(), rng, 10, 3);
  const auto phi = random_state(source_registry(), rng, 10, 3);
  const double theta = rng.uniform() * std::numbers::pi;
  const auto r_psi = rotate_polarization_radians(psi, kAliceChannel, theta);
  const auto r_phi = rotate_polarization_radians(phi, kAliceChannel, theta);
  EXPECT_NEAR(r_psi.norm_squared(), 1.0, 1e-12);
  EXPECT_LT(std::abs(inner_product(r_phi, r_psi) - inner_product(phi, psi)), 1e-12);
  EXPECT_LT(max_amplitude_diff(rotate_polarization_radians(r_psi, kAliceChannel, -theta), psi), 1e-12);
}

TEST_P(RotationProperties, SingletInvariantUnderJointRotation) {
  RandomStream rng(GetParam());
  const double theta = rng.uniform() * std::numbers::pi;
  const auto singlet = singlet_state(source_registry());
  const auto rotated = rotate_polarization_radians(
      rotate_polarization_radians(singlet, kAliceChannel, theta), kBobChannel, theta);
  EXPECT_LT(max_amplitude_diff(rotated, singlet), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RotationProperties, ::testing::Range<std::uint64_t>(1, 11));

TEST(BeamSplitter, SplitsOnePhoton) {
  const ModeLabel ah = kAliceChannel.h();
  const ModeLabel bh = kBobChannel.h();
  const auto out = beamsplitter_50_50(basis_state({1, 0, 0, 0}), ah, bh);
  EXPECT_NEAR(out.amplitude(Occupation{1, 0, 0, 0}).real(), kHalfRoot2, 1e-15);
  EXPECT_NEAR(out.amplitude(Occupation{0, 0, 1, 0}).real(), kHalfRoot2, 1e-15);
}

TEST(BeamSplitter, BinomialExpansionOfTwoPhotons) {
  const auto out = beamsplitter_50_50(basis_state({2, 0, 0, 0}), kAliceChannel.h(), kBobChannel.h());
  EXPECT_NEAR(out.amplitude(Occupation{2, 0, 0, 0}).real(), 0.5, 1e-15);
  EXPECT_NEAR(out.amplitude(Occupation{1, 0, 1, 0}).real(), kHalfRoot2, 1e-15);
  EXPECT_NEAR(out.amplitude(Occupation{0, 0, 2, 0}).real(), 0.5, 1e-15);
  EXPECT_NEAR(out.norm_squared(), 1.0, 1e-15);
}

TEST(BeamSplitter, RejectsOccupiedTargetAndSamePort) {
  EXPECT_THROW(beamsplitter_50_50(basis_state({1, 0, 1, 0}), kAliceChannel.h(), kBobChannel.h()),
               std::invalid_argument);
  EXPECT_THROW(beamsplitter_50_50(basis_state({1, 0, 0, 0}), kAliceChannel.h(), kAliceChannel.h()),
               std::invalid_argument);
}

TEST(QndCount, DistributionAfterBeamSplitter) {
  const auto split = beamsplitter_50_50(basis_state({2, 0, 0, 0}), kAliceChannel.h(), kBobChannel.h());
  const ModeLabel bob_h = kBobChannel.h();
  const auto outcomes = qnd_count(split, std::span<const ModeLabel>(&bob_h, 1));
  ASSERT_EQ(outcomes.size(), 3u);
  EXPECT_NEAR(outcomes[0].probability, 0.25, 1e-15);
  EXPECT_NEAR(outcomes[1].probability, 0.5, 1e-15);
  EXPECT_NEAR(outcomes[2].probability, 0.25, 1e-15);
  EXPECT_EQ(outcomes[1].count, 1);
  EXPECT_NEAR(outcomes[1].post_state.amplitude(Occupation{1, 0, 1, 0}).real(), 1.0, 1e-15);
  EXPECT_THROW(qnd_count(split, {}), std::invalid_argument);
}

TEST(ThresholdDetect, DoubleClickGetsRandomBit) {
  RandomStream rng(3);
  int ones = 0;
  for (int i = 0; i < 200; ++i) {
    const auto detection = threshold_detect(basis_state({1, 1, 0, 0}), kAliceChannel, BasisAngle::hv(), rng);
    ASSERT_EQ(detection.outcome.kind, DetectionKind::kDoubleClick);
    ASSERT_TRUE(detection.outcome.assigned_bit.has_value());
    ones += *detection.outcome.assigned_bit;
  }
  EXPECT_GT(ones, 60);
  EXPECT_LT(ones, 140);
}

TEST(ThresholdDetect, SingletOutcomesAndCollapse) {
  RandomStream rng(9);
  const auto singlet = singlet_state(source_registry());
  int zeros = 0;
  for (int i = 0; i < 400; ++i) {
    const auto alice = threshold_detect(singlet, kAliceChannel, BasisAngle::da(), rng);
    ASSERT_TRUE(alice.outcome.kind == DetectionKind::kBit0 || alice.outcome.kind == DetectionKind::kBit1);
    zeros += alice.outcome.kind == DetectionKind::kBit0;
    for (const auto& [occupation, amplitude] : alice.post_state.terms()) {
      EXPECT_EQ(occupation[0] + occupation[1], 0);
    }
    // Anticorrelated partner in the same basis.
    const auto bob = threshold_detect(alice.post_state, kBobChannel, BasisAngle::da(), rng);
    EXPECT_NE(bob.outcome.kind, alice.outcome.kind);
  }
  EXPECT_GT(zeros, 150);
  EXPECT_LT(zeros, 250);
}

TEST(ThresholdDetect, VacuumGivesNoClick) {
  RandomStream rng(1);
  const auto detection =
      threshold_detect(StateVector::vacuum(source_registry()), kBobChannel, BasisAngle::hv(), rng);
  EXPECT_EQ(detection.outcome.kind, DetectionKind::kNoClick);
  EXPECT_FALSE(detection.outcome.assigned_bit.has_value());
}

TEST(CreatePolarized, DiagonalPhoton) {
  const auto vac = StateVector::vacuum(source_registry());
  const auto d = create_polarized(vac, kAliceChannel, BasisAngle::da(), 0);
  EXPECT_NEAR(d.amplitude(Occupation{1, 0, 0, 0}).real(), kHalfRoot2, 1e-15);
  EXPECT_NEAR(d.amplitude(Occupation{0, 1, 0, 0}).real(), kHalfRoot2, 1e-15);
  const auto a = create_polarized(vac, kAliceChannel, BasisAngle::da(), 1);
  EXPECT_NEAR(a.amplitude(Occupation{1, 0, 0, 0}).real(), -kHalfRoot2, 1e-15);
  EXPECT_NEAR(a.amplitude(Occupation{0, 1, 0, 0}).real(), kHalfRoot2, 1e-15);
  // Measuring in the preparation basis is deterministic.
  RandomStream rng(2);
  EXPECT_EQ(threshold_detect(a, kAliceChannel, BasisAngle::da(), rng).outcome.kind, DetectionKind::kBit1);
}
