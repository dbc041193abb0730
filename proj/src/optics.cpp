#include "fockqkd/optics.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace fockqkd {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

double factorial(int n) {
  double out = 1.0;
  for (int k = 2; k <= n; ++k) {
    out *= k;
  }
  return out;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// Linear substitution of creation operators on two modes:
//   a+_i -> u[0][0] a+_i + u[0][1] a+_j,   a+_j -> u[1][0] a+_i + u[1][1] a+_j.
// Each term is a monomial over vacuum, so the image is obtained by binomial expansion.
StateVector substitute_two_modes(const StateVector& state, std::size_t i, std::size_t j,
                                 const std::array<std::array<double, 2>, 2>& u) {
  const int cap = state.photon_cap();
  const ModeRegistry& registry = state.registry();
  return transform_terms(state, [&](const Occupation& occupation, Amplitude amplitude, auto emit) {
    const int p = occupation[i];
    const int q = occupation[j];
    const double inv_norm = 1.0 / std::sqrt(factorial(p) * factorial(q));
    for (int r = 0; r <= p; ++r) {
      const double from_i = binomial(p, r) * std::pow(u[0][0], p - r) * std::pow(u[0][1], r);
      if (from_i == 0.0) {
        continue;
      }
      for (int s = 0; s <= q; ++s) {
        const double from_j = binomial(q, s) * std::pow(u[1][0], q - s) * std::pow(u[1][1], s);
        if (from_j == 0.0) {
          continue;
        }
        const int out_i = (p - r) + (q - s);
        const int out_j = r + s;
        if (out_i > cap || out_j > cap) {
          throw std::invalid_argument(
              "photon cap " + std::to_string(cap) + " exceeded in mode " +
              to_string(registry.label(out_i > cap ? i : j)));
        }
        Occupation mapped = occupation;
        mapped[i] = static_cast<std::uint8_t>(out_i);
        mapped[j] = static_cast<std::uint8_t>(out_j);
        const double weight =
            from_i * from_j * std::sqrt(factorial(out_i) * factorial(out_j)) * inv_norm;
        emit(mapped, amplitude * weight);
      }
    }
  });
}

std::pair<double, double> cos_sin(double theta) {
  if (theta == kQuarterPi) {
    return {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
  }
  return {std::cos(theta), std::sin(theta)};
}

}  // namespace

BasisAngle::BasisAngle(double theta) : theta_(theta) {
  if (!(theta >= 0.0 && theta < std::numbers::pi)) {
    throw std::invalid_argument("basis angle must lie in [0, pi), got " + std::to_string(theta));
  }
}

BasisAngle BasisAngle::da() { return BasisAngle(kQuarterPi); }

bool BasisAngle::is_da() const { return theta_ == kQuarterPi; }

std::string BasisAngle::name() const {
  if (is_hv()) {
    return "HV";
  }
  if (is_da()) {
    return "DA";
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", theta_);
  return buffer;
}

BasisAngle parse_basis(const std::string& text) {
  if (text == "HV") {
    return BasisAngle::hv();
  }
  if (text == "DA") {
    return BasisAngle::da();
  }
  std::size_t consumed = 0;
  double theta = 0.0;
  try {
    theta = std::stod(text, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed == 0 || consumed != text.size()) {
    throw std::invalid_argument("unrecognized basis '" + text + "'");
  }
  return BasisAngle(theta);
}

DetectionKind classify_clicks(int first_detector_photons, int second_detector_photons) {
  const bool first = first_detector_photons > 0;
  const bool second = second_detector_photons > 0;
  if (first && second) {
    return DetectionKind::kDoubleClick;
  }
  if (first) {
    return DetectionKind::kBit0;
  }
  if (second) {
    return DetectionKind::kBit1;
  }
  return DetectionKind::kNoClick;
}

char to_char(DetectionKind kind) {
  switch (kind) {
    case DetectionKind::kNoClick:
      return 'N';
    case DetectionKind::kBit0:
      return '0';
    case DetectionKind::kBit1:
      return '1';
    case DetectionKind::kDoubleClick:
      return 'D';
  }
  return '?';
}

StateVector beamsplitter_50_50(const StateVector& state, const ModeLabel& from,
                               const ModeLabel& to) {
  const std::size_t i = state.registry().index_of(from);
  const std::size_t j = state.registry().index_of(to);
  if (i == j) {
    throw std::invalid_argument("beamsplitter ports must be distinct modes");
  }
  for (const auto& term : state.terms()) {
    if (term.first[j] != 0) {
      throw std::invalid_argument("beamsplitter output mode " + to_string(to) +
                                  " must be unoccupied");
    }
  }
  constexpr double h = std::numbers::sqrt2 / 2.0;
  return substitute_two_modes(state, i, j, {{{h, h}, {h, -h}}});
}

StateVector rotate_polarization(const StateVector& state, Channel channel, BasisAngle basis) {
  return rotate_polarization_radians(state, channel, basis.theta());
}

StateVector rotate_polarization_radians(const StateVector& state, Channel channel, double theta) {
  const std::size_t h = state.registry().index_of(channel.h());
  const std::size_t v = state.registry().index_of(channel.v());
  if (theta == 0.0) {
    return state;
  }
  const auto [c, s] = cos_sin(theta);
  // Inverse of the detector-mode definition: aH+ = c a0'+ - s a1'+, aV+ = s a0'+ + c a1'+.
  return substitute_two_modes(state, h, v, {{{c, -s}, {s, c}}});
}

std::vector<CountOutcome> qnd_count(const StateVector& state, std::span<const ModeLabel> modes) {
  if (modes.empty()) {
    throw std::invalid_argument("photon-number measurement needs at least one mode");
  }
  std::vector<std::size_t> indices;
  for (const auto& label : modes) {
    indices.push_back(state.registry().index_of(label));
  }
  std::map<int, std::vector<Term>> sectors;
  for (const auto& term : state.terms()) {
    sectors[photons_in(term.first, indices)].push_back(term);
  }
  std::vector<CountOutcome> outcomes;
  for (auto& [count, terms] : sectors) {
    double probability = 0.0;
    for (const auto& term : terms) {
      probability += std::norm(term.second);
    }
    const double scale = 1.0 / std::sqrt(probability);
    for (auto& term : terms) {
      term.second *= scale;
    }
    outcomes.push_back({count, probability, state.with_terms(std::move(terms))});
  }
  return outcomes;
}

Detection threshold_detect(const StateVector& state, Channel channel, BasisAngle basis,
                           RandomStream& rng) {
  const StateVector rotated = rotate_polarization(state, channel, basis);
  const std::size_t i0 = rotated.registry().index_of(channel.h());
  const std::size_t i1 = rotated.registry().index_of(channel.v());

  std::map<std::pair<int, int>, double> weights;
  double total = 0.0;
  for (const auto& [occupation, amplitude] : rotated.terms()) {
    const double w = std::norm(amplitude);
    weights[{occupation[i0], occupation[i1]}] += w;
    total += w;
  }
  if (!(total > 0.0)) {
    throw std::domain_error("cannot measure the zero state");
  }

  const double draw = rng.uniform() * total;
  std::pair<int, int> counts = weights.rbegin()->first;
  double cumulative = 0.0;
  for (const auto& [key, w] : weights) {
    cumulative += w;
    if (draw < cumulative) {
      counts = key;
      break;
    }
  }

  std::vector<Term> kept;
  for (const auto& [occupation, amplitude] : rotated.terms()) {
    if (occupation[i0] == counts.first && occupation[i1] == counts.second) {
      Occupation absorbed = occupation;
      absorbed[i0] = 0;
      absorbed[i1] = 0;
      kept.emplace_back(absorbed, amplitude);
    }
  }

  Detection detection{{classify_clicks(counts.first, counts.second), std::nullopt},
                      rotated.with_terms(std::move(kept)).normalized()};
  switch (detection.outcome.kind) {
    case DetectionKind::kBit0:
      detection.outcome.assigned_bit = 0;
      break;
    case DetectionKind::kBit1:
      detection.outcome.assigned_bit = 1;
      break;
    case DetectionKind::kDoubleClick:
      detection.outcome.assigned_bit = rng.coin() ? 1 : 0;
      break;
    case DetectionKind::kNoClick:
      break;
  }
  return detection;
}

StateVector create_polarized(const StateVector& state, Channel channel, BasisAngle basis, int bit) {
  if (bit != 0 && bit != 1) {
    throw std::invalid_argument("detector index must be 0 or 1");
  }
  const auto [c, s] = cos_sin(basis.theta());
  const StateVector with_h = create(state, channel.h());
  const StateVector with_v = create(state, channel.v());
  if (bit == 0) {
    return Amplitude{c} * with_h + Amplitude{s} * with_v;
  }
  return Amplitude{-s} * with_h + Amplitude{c} * with_v;
}

}  // namespace fockqkd
