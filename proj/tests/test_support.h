#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fockqkd/fock_state.h"
#include "fockqkd/rng.h"

namespace fockqkd::testing {

inline RegistryPtr four_modes() {
  return make_registry({{Party::kA, 0, Polarization::kP0},
                        {Party::kA, 0, Polarization::kP1},
                        {Party::kB, 0, Polarization::kP0},
                        {Party::kB, 0, Polarization::kP1}});
}

// Normalized state with `term_count` random terms of up to `max_per_mode` photons per mode.
inline StateVector random_state(RegistryPtr registry, RandomStream& rng, int term_count,
                                int max_per_mode = 2) {
  std::vector<Term> terms;
  for (int t = 0; t < term_count; ++t) {
    Occupation occupation(registry->size());
    for (std::size_t m = 0; m < registry->size(); ++m) {
      occupation[m] = static_cast<std::uint8_t>(rng.next_u64() % (max_per_mode + 1));
    }
    terms.emplace_back(occupation, Amplitude(rng.uniform() - 0.5, rng.uniform() - 0.5));
  }
  return StateVector::from_terms(std::move(registry), std::move(terms)).normalized();
}

// Largest per-amplitude difference over the union of both supports.
inline double max_amplitude_diff(const StateVector& x, const StateVector& y) {
  double worst = 0.0;
  for (const auto& [occupation, amplitude] : x.terms()) {
    worst = std::max(worst, std::abs(amplitude - y.amplitude(occupation)));
  }
  for (const auto& [occupation, amplitude] : y.terms()) {
    worst = std::max(worst, std::abs(amplitude - x.amplitude(occupation)));
  }
  return worst;
}

}  // namespace fockqkd::testing
