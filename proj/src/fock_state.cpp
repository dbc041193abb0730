#include "fockqkd/fock_state.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace fockqkd {

Occupation::Occupation(std::size_t num_modes) {
  if (num_modes > kMaxModes) {
    throw std::invalid_argument("occupation vector longer than " + std::to_string(kMaxModes));
  }
  size_ = static_cast<std::uint8_t>(num_modes);
}

Occupation::Occupation(std::initializer_list<int> counts) : Occupation(counts.size()) {
  std::size_t i = 0;
  for (int c : counts) {
    if (c < 0 || c > 255) {
      throw std::invalid_argument("photon count out of range: " + std::to_string(c));
    }
    counts_[i++] = static_cast<std::uint8_t>(c);
  }
}

int Occupation::total() const {
  return std::accumulate(counts_.begin(), counts_.begin() + size_, 0);
}

Occupation Occupation::with_appended(std::uint8_t count) const {
  if (size_ == kMaxModes) {
    throw std::invalid_argument("occupation vector longer than " + std::to_string(kMaxModes));
  }
  Occupation out = *this;
  out.counts_[out.size_++] = count;
  return out;
}

RegistryPtr make_registry(std::vector<ModeLabel> modes) {
  return std::make_shared<const ModeRegistry>(std::move(modes));
}

namespace {

void validate_settings(const StateSettings& settings) {
  if (!(settings.prune_tol >= 0.0)) {
    throw std::invalid_argument("prune_tol must be non-negative");
  }
  if (settings.photon_cap < 1 || settings.photon_cap > 255) {
    throw std::invalid_argument("photon_cap must be in [1, 255]");
  }
}

// Sorts, merges duplicates and prunes in place.
void canonicalize(std::vector<Term>& terms, double prune_tol) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    Term merged = terms[i];
    std::size_t j = i + 1;
    for (; j < terms.size() && terms[j].first == merged.first; ++j) {
      merged.second += terms[j].second;
    }
    if (std::abs(merged.second) >= prune_tol && merged.second != Amplitude{}) {
      terms[out++] = merged;
    }
    i = j;
  }
  terms.resize(out);
}

}  // namespace

StateVector::StateVector() : registry_(std::make_shared<const ModeRegistry>()) {}

StateVector::StateVector(RegistryPtr registry, StateSettings settings)
    : registry_(std::move(registry)), settings_(settings) {
  if (!registry_) {
    throw std::invalid_argument("state requires a mode registry");
  }
  validate_settings(settings_);
}

StateVector StateVector::vacuum(RegistryPtr registry, StateSettings settings) {
  StateVector state(std::move(registry), settings);
  state.terms_.emplace_back(Occupation(state.registry_->size()), Amplitude{1.0, 0.0});
  return state;
}

StateVector StateVector::from_terms(RegistryPtr registry, std::vector<Term> terms,
                                    StateSettings settings) {
  return StateVector(std::move(registry), settings).with_terms(std::move(terms));
}

StateVector StateVector::with_terms(std::vector<Term> terms) const {
  const std::size_t num_modes = registry_->size();
  for (const auto& [occupation, amplitude] : terms) {
    if (occupation.size() != num_modes) {
      throw std::invalid_argument("occupation length " + std::to_string(occupation.size()) +
                                  " does not match registry size " + std::to_string(num_modes));
    }
    for (std::size_t m = 0; m < num_modes; ++m) {
      if (occupation[m] > settings_.photon_cap) {
        throw std::invalid_argument("photon cap " + std::to_string(settings_.photon_cap) +
                                    " exceeded in mode " + to_string(registry_->label(m)));
      }
    }
  }
  StateVector out(registry_, settings_);
  out.discarded_mass_ = discarded_mass_;
  canonicalize(terms, settings_.prune_tol);
  out.terms_ = std::move(terms);
  return out;
}

Amplitude StateVector::amplitude(const Occupation& occupation) const {
  const auto it = std::lower_bound(
      terms_.begin(), terms_.end(), occupation,
      [](const Term& term, const Occupation& key) { return term.first < key; });
  if (it == terms_.end() || it->first != occupation) {
    return {};
  }
  return it->second;
}

double StateVector::norm_squared() const {
  double sum = 0.0;
  for (const auto& term : terms_) {
    sum += std::norm(term.second);
  }
  return sum;
}

StateVector StateVector::with_discarded_mass(double mass) const {
  StateVector out = *this;
  out.discarded_mass_ = mass;
  return out;
}

StateVector StateVector::scaled(Amplitude factor) const {
  std::vector<Term> terms(terms_.begin(), terms_.end());
  for (auto& term : terms) {
    term.second *= factor;
  }
  return with_terms(std::move(terms));
}

StateVector StateVector::normalized() const {
  const double norm2 = norm_squared();
  if (norm2 <= 0.0) {
    throw std::domain_error("cannot normalize the zero state");
  }
  return scaled(1.0 / std::sqrt(norm2));
}

namespace {

void require_same_registry(const StateVector& x, const StateVector& y) {
  if (x.shared_registry() != y.shared_registry() && x.registry() != y.registry()) {
    throw std::invalid_argument("states are defined over different mode registries");
  }
}

StateVector combine(const StateVector& x, const StateVector& y, double sign) {
  require_same_registry(x, y);
  std::vector<Term> terms(x.terms().begin(), x.terms().end());
  terms.reserve(x.term_count() + y.term_count());
  for (const auto& [occupation, amplitude] : y.terms()) {
    terms.emplace_back(occupation, sign * amplitude);
  }
  return x.with_terms(std::move(terms));
}

}  // namespace

StateVector operator+(const StateVector& x, const StateVector& y) { return combine(x, y, 1.0); }

StateVector operator-(const StateVector& x, const StateVector& y) { return combine(x, y, -1.0); }

StateVector operator*(Amplitude factor, const StateVector& x) { return x.scaled(factor); }

StateVector create(const StateVector& state, const ModeLabel& mode) {
  const std::size_t index = state.registry().index_of(mode);
  const int cap = state.photon_cap();
  return transform_terms(state, [&](const Occupation& occupation, Amplitude amplitude, auto emit) {
    const int n = occupation[index];
    if (n + 1 > cap) {
      throw std::invalid_argument("photon cap " + std::to_string(cap) + " exceeded in mode " +
                                  to_string(mode));
    }
    Occupation raised = occupation;
    raised[index] = static_cast<std::uint8_t>(n + 1);
    emit(raised, amplitude * std::sqrt(static_cast<double>(n + 1)));
  });
}

StateVector annihilate(const StateVector& state, const ModeLabel& mode) {
  const std::size_t index = state.registry().index_of(mode);
  return transform_terms(state, [&](const Occupation& occupation, Amplitude amplitude, auto emit) {
    const int n = occupation[index];
    if (n == 0) {
      return;
    }
    Occupation lowered = occupation;
    lowered[index] = static_cast<std::uint8_t>(n - 1);
    emit(lowered, amplitude * std::sqrt(static_cast<double>(n)));
  });
}

Amplitude inner_product(const StateVector& x, const StateVector& y) {
  require_same_registry(x, y);
  Amplitude sum{};
  auto xi = x.terms().begin();
  auto yi = y.terms().begin();
  while (xi != x.terms().end() && yi != y.terms().end()) {
    if (xi->first < yi->first) {
      ++xi;
    } else if (yi->first < xi->first) {
      ++yi;
    } else {
      sum += std::conj(xi->second) * yi->second;
      ++xi;
      ++yi;
    }
  }
  return sum;
}

Projection project(const StateVector& state, const OccupationPredicate& predicate) {
  std::vector<Term> matching;
  double probability = 0.0;
  for (const auto& term : state.terms()) {
    if (predicate(term.first)) {
      matching.push_back(term);
      probability += std::norm(term.second);
    }
  }
  if (probability > 0.0) {
    const double scale = 1.0 / std::sqrt(probability);
    for (auto& term : matching) {
      term.second *= scale;
    }
  }
  return {probability, state.with_terms(std::move(matching))};
}

StateVector add_mode(const StateVector& state, const ModeLabel& label) {
  auto registry = std::make_shared<const ModeRegistry>(state.registry().with_mode(label));
  std::vector<Term> terms;
  terms.reserve(state.term_count());
  for (const auto& [occupation, amplitude] : state.terms()) {
    terms.emplace_back(occupation.with_appended(0), amplitude);
  }
  return StateVector::from_terms(std::move(registry), std::move(terms), state.settings())
      .with_discarded_mass(state.discarded_mass());
}

int photons_in(const Occupation& occupation, std::span<const std::size_t> modes) {
  int total = 0;
  for (std::size_t m : modes) {
    total += occupation[m];
  }
  return total;
}

std::string dump(const StateVector& state) {
  std::string out;
  char buffer[64];
  for (const auto& [occupation, amplitude] : state.terms()) {
    for (std::size_t m = 0; m < occupation.size(); ++m) {
      if (m != 0) {
        out += ',';
      }
      out += std::to_string(occupation[m]);
    }
    // Components below prune_tol print as exact zero; +0.0 folds negative zero.
    auto clean = [&](double v) { return std::abs(v) < state.prune_tol() ? 0.0 : v + 0.0; };
    std::snprintf(buffer, sizeof(buffer), " %.12g %.12g\n", clean(amplitude.real()),
                  clean(amplitude.imag()));
    out += buffer;
  }
  return out;
}

}  // namespace fockqkd
