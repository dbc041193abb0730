#pragma once

#include <span>
#include <vector>

#include "fockqkd/fock_state.h"

namespace fockqkd {

inline constexpr Channel kAliceChannel{Party::kA, 0};
inline constexpr Channel kBobChannel{Party::kB, 0};

// AH, AV, BH, BV in that order, matching the |ijkl> occupation convention.
RegistryPtr source_registry();

struct SpdcParams {
  static constexpr int kMaxPairs = 6;

  double tanh_xi = 0.0;  // tanh|xi|, in [0, 1)
  double phi = 0.0;      // pump phase, radians
  int n_max = 4;         // pair-number truncation

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

double tanh_from_squeezing(double xi_magnitude);
double squeezing_from_tanh(double tanh_xi);

// Vacuum amplitude C0 = 1/cosh^2|xi| = 1 - tanh^2|xi|.
double vacuum_amplitude(const SpdcParams& params);

// Probability mass in the pair sectors n > n_max (closed form of the series tail).
double truncation_tail(const SpdcParams& params);

// Closed-form two-mode polarization-entangled SPDC state truncated at n_max pairs:
//   C0 sum_n e^{i n phi} tanh^n|xi| sum_m (-1)^m |m, n-m, n-m, m>.
// The registry must hold the four source modes; any further modes stay empty.
// The returned state carries the truncation tail as its discarded mass.
StateVector spdc_state(const SpdcParams& params, RegistryPtr registry);

// Same state built from C_0000 = C0 by the two coefficient recursions
//   C_{i,j+1,k+1,l} =  e^{i phi} tanh|xi| C_ijkl   (add a V_A H_B pair)
//   C_{i+1,j,k,l+1} = -e^{i phi} tanh|xi| C_ijkl   (add an H_A V_B pair)
StateVector spdc_state_recursive(const SpdcParams& params, RegistryPtr registry);

enum class PairStep { kAddVhPair, kAddHvPair };

// Coefficient reached from C_0000 by applying the recursions along `path`.
Amplitude recursive_coefficient(const SpdcParams& params, std::span<const PairStep> path);

struct PairProbability {
  int n = 0;
  double probability = 0.0;
};

// P(n) = (n+1) tanh^{2n}|xi| / cosh^4|xi| for n = 0..n_max.
std::vector<PairProbability> pair_statistics(const SpdcParams& params);

// (|0220> + |2002> - |1111>)/sqrt(3).
StateVector four_photon_component(RegistryPtr registry);

// (|0110> - |1001>)/sqrt(2).
StateVector singlet_state(RegistryPtr registry);

}  // namespace fockqkd
