#include "fockqkd/spdc.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fockqkd {

namespace {

struct SourceModes {
  std::size_t ah, av, bh, bv;
};

SourceModes source_modes(const ModeRegistry& registry) {
  return {registry.index_of(kAliceChannel.h()), registry.index_of(kAliceChannel.v()),
          registry.index_of(kBobChannel.h()), registry.index_of(kBobChannel.v())};
}

Occupation source_occupation(const ModeRegistry& registry, const SourceModes& modes, int i, int j,
                             int k, int l) {
  Occupation occupation(registry.size());
  occupation[modes.ah] = static_cast<std::uint8_t>(i);
  occupation[modes.av] = static_cast<std::uint8_t>(j);
  occupation[modes.bh] = static_cast<std::uint8_t>(k);
  occupation[modes.bv] = static_cast<std::uint8_t>(l);
  return occupation;
}

Amplitude pair_factor(const SpdcParams& params) {
  return std::polar(params.tanh_xi, params.phi);
}

StateSettings settings_for(const SpdcParams& params) {
  StateSettings settings;
  if (params.n_max > settings.photon_cap) {
    settings.photon_cap = params.n_max;
  }
  return settings;
}

}  // namespace

RegistryPtr source_registry() {
  return make_registry({kAliceChannel.h(), kAliceChannel.v(), kBobChannel.h(), kBobChannel.v()});
}

void SpdcParams::validate() const {
  if (!(tanh_xi >= 0.0 && tanh_xi < 1.0)) {
    throw std::invalid_argument("tanh_xi must lie in [0, 1), got " + std::to_string(tanh_xi));
  }
  if (!std::isfinite(phi)) {
    throw std::invalid_argument("phi must be finite");
  }
  if (n_max < 0 || n_max > kMaxPairs) {
    throw std::invalid_argument("n_max must lie in [0, " + std::to_string(kMaxPairs) + "], got " +
                                std::to_string(n_max));
  }
}

double tanh_from_squeezing(double xi_magnitude) {
  if (!(xi_magnitude >= 0.0)) {
    throw std::invalid_argument("squeezing magnitude must be non-negative");
  }
  return std::tanh(xi_magnitude);
}

double squeezing_from_tanh(double tanh_xi) {
  if (!(tanh_xi >= 0.0 && tanh_xi < 1.0)) {
    throw std::invalid_argument("tanh_xi must lie in [0, 1)");
  }
  return std::atanh(tanh_xi);
}

double vacuum_amplitude(const SpdcParams& params) {
  params.validate();
  return 1.0 - params.tanh_xi * params.tanh_xi;
}

double truncation_tail(const SpdcParams& params) {
  params.validate();
  // C0^2 sum_{n>=N} (n+1) x^n with C0^2 = (1-x)^2 sums to x^N ((N+1) - N x).
  const double x = params.tanh_xi * params.tanh_xi;
  const int first_dropped = params.n_max + 1;
  return std::pow(x, first_dropped) * ((first_dropped + 1) - first_dropped * x);
}

StateVector spdc_state(const SpdcParams& params, RegistryPtr registry) {
  params.validate();
  const SourceModes modes = source_modes(*registry);
  const double c0 = vacuum_amplitude(params);
  std::vector<Term> terms;
  for (int n = 0; n <= params.n_max; ++n) {
    const Amplitude sector = c0 * std::polar(std::pow(params.tanh_xi, n), n * params.phi);
    for (int m = 0; m <= n; ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      terms.emplace_back(source_occupation(*registry, modes, m, n - m, n - m, m), sign * sector);
    }
  }
  return StateVector::from_terms(std::move(registry), std::move(terms), settings_for(params))
      .with_discarded_mass(truncation_tail(params));
}

StateVector spdc_state_recursive(const SpdcParams& params, RegistryPtr registry) {
  params.validate();
  const SourceModes modes = source_modes(*registry);
  const Amplitude factor = pair_factor(params);
  const int size = params.n_max + 1;
  // coefficient[i][j] multiplies |i, j, j, i>.
  std::vector<std::vector<Amplitude>> coefficient(size, std::vector<Amplitude>(size));
  coefficient[0][0] = vacuum_amplitude(params);
  std::vector<Term> terms;
  for (int i = 0; i <= params.n_max; ++i) {
    for (int j = 0; i + j <= params.n_max; ++j) {
      if (j > 0) {
        coefficient[i][j] = factor * coefficient[i][j - 1];
      } else if (i > 0) {
        coefficient[i][j] = -factor * coefficient[i - 1][j];
      }
      terms.emplace_back(source_occupation(*registry, modes, i, j, j, i), coefficient[i][j]);
    }
  }
  return StateVector::from_terms(std::move(registry), std::move(terms), settings_for(params))
      .with_discarded_mass(truncation_tail(params));
}

Amplitude recursive_coefficient(const SpdcParams& params, std::span<const PairStep> path) {
  const Amplitude factor = pair_factor(params);
  Amplitude coefficient = vacuum_amplitude(params);
  for (PairStep step : path) {
    coefficient *= (step == PairStep::kAddVhPair) ? factor : -factor;
  }
  return coefficient;
}

std::vector<PairProbability> pair_statistics(const SpdcParams& params) {
  const double c0 = vacuum_amplitude(params);
  const double x = params.tanh_xi * params.tanh_xi;
  std::vector<PairProbability> out;
  for (int n = 0; n <= params.n_max; ++n) {
    out.push_back({n, (n + 1) * std::pow(x, n) * c0 * c0});
  }
  return out;
}

StateVector four_photon_component(RegistryPtr registry) {
  const SourceModes modes = source_modes(*registry);
  const double a = 1.0 / std::sqrt(3.0);
  std::vector<Term> terms = {
      {source_occupation(*registry, modes, 0, 2, 2, 0), a},
      {source_occupation(*registry, modes, 1, 1, 1, 1), -a},
      {source_occupation(*registry, modes, 2, 0, 0, 2), a},
  };
  return StateVector::from_terms(std::move(registry), std::move(terms));
}

StateVector singlet_state(RegistryPtr registry) {
  const SourceModes modes = source_modes(*registry);
  const double a = 1.0 / std::sqrt(2.0);
  std::vector<Term> terms = {
      {source_occupation(*registry, modes, 0, 1, 1, 0), a},
      {source_occupation(*registry, modes, 1, 0, 0, 1), -a},
  };
  return StateVector::from_terms(std::move(registry), std::move(terms));
}

}  // namespace fockqkd
