#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fockqkd/mode_registry.h"

namespace fockqkd {

using Amplitude = std::complex<double>;

// Photon count per registered mode. Fixed capacity so that terms never allocate.
class Occupation {
 public:
  Occupation() = default;
  explicit Occupation(std::size_t num_modes);
  Occupation(std::initializer_list<int> counts);

  std::size_t size() const { return size_; }
  std::uint8_t operator[](std::size_t mode) const { return counts_[mode]; }
  std::uint8_t& operator[](std::size_t mode) { return counts_[mode]; }
  std::span<const std::uint8_t> counts() const { return {counts_.data(), size_}; }

  int total() const;
  Occupation with_appended(std::uint8_t count) const;

  friend bool operator==(const Occupation&, const Occupation&) = default;
  // Lexicographic in mode order (unused slots are always zero).
  friend auto operator<=>(const Occupation&, const Occupation&) = default;

 private:
  std::array<std::uint8_t, kMaxModes> counts_{};
  std::uint8_t size_ = 0;
};

using Term = std::pair<Occupation, Amplitude>;
using RegistryPtr = std::shared_ptr<const ModeRegistry>;

RegistryPtr make_registry(std::vector<ModeLabel> modes);

struct StateSettings {
  double prune_tol = 1e-12;
  int photon_cap = 8;
};

// Sparse pure state over a truncated multi-mode Fock space. Immutable: every
// operation returns a new value. Terms are kept sorted by occupation and no
// stored amplitude has magnitude below prune_tol.
class StateVector {
 public:
  StateVector();
  explicit StateVector(RegistryPtr registry, StateSettings settings = {});

  static StateVector vacuum(RegistryPtr registry, StateSettings settings = {});
  // Duplicate occupations are summed. Throws on length mismatch or cap violation.
  static StateVector from_terms(RegistryPtr registry, std::vector<Term> terms,
                                StateSettings settings = {});

  // Same registry, settings and metadata with a new term list.
  StateVector with_terms(std::vector<Term> terms) const;

  const ModeRegistry& registry() const { return *registry_; }
  const RegistryPtr& shared_registry() const { return registry_; }
  const StateSettings& settings() const { return settings_; }
  double prune_tol() const { return settings_.prune_tol; }
  int photon_cap() const { return settings_.photon_cap; }

  std::span<const Term> terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  Amplitude amplitude(const Occupation& occupation) const;
  double norm_squared() const;

  // Probability mass known to be missing from this state (e.g. a truncated series).
  double discarded_mass() const { return discarded_mass_; }
  StateVector with_discarded_mass(double mass) const;

  StateVector scaled(Amplitude factor) const;
  // Throws std::domain_error on the zero state.
  StateVector normalized() const;

 private:
  RegistryPtr registry_;
  std::vector<Term> terms_;
  StateSettings settings_;
  double discarded_mass_ = 0.0;
};

StateVector operator+(const StateVector& x, const StateVector& y);
StateVector operator-(const StateVector& x, const StateVector& y);
StateVector operator*(Amplitude factor, const StateVector& x);

struct Projection {
  double probability = 0.0;
  StateVector post_state;
};

using OccupationPredicate = std::function<bool(const Occupation&)>;

StateVector create(const StateVector& state, const ModeLabel& mode);
StateVector annihilate(const StateVector& state, const ModeLabel& mode);
// Conjugate-linear in x. Throws std::invalid_argument if the registries differ.
Amplitude inner_product(const StateVector& x, const StateVector& y);
// probability is the squared norm of the matching terms (the Born probability when
// `state` is normalized); post_state is those terms renormalized.
Projection project(const StateVector& state, const OccupationPredicate& predicate);
StateVector add_mode(const StateVector& state, const ModeLabel& label);

// Total photon number over the given mode indices.
int photons_in(const Occupation& occupation, std::span<const std::size_t> modes);

// One line per term: "<counts> <re> <im>", sorted by counts.
std::string dump(const StateVector& state);

// Applies a per-term linear map. `emit(occupation, amplitude)` may be called any
// number of times per input term; results are merged and pruned.
template <typename Fn>
StateVector transform_terms(const StateVector& state, Fn&& fn) {
  std::vector<Term> out;
  out.reserve(state.term_count() * 2);
  auto emit = [&out](const Occupation& occupation, Amplitude amplitude) {
    out.emplace_back(occupation, amplitude);
  };
  for (const auto& [occupation, amplitude] : state.terms()) {
    fn(occupation, amplitude, emit);
  }
  return state.with_terms(std::move(out));
}

}  // namespace fockqkd
