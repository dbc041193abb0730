#include "fockqkd/mode_registry.h"

#include <algorithm>
#include <stdexcept>

namespace fockqkd {

std::string to_string(Party party) {
  switch (party) {
    case Party::kA:
      return "A";
    case Party::kB:
      return "B";
    case Party::kE1:
      return "E1";
    case Party::kE2:
      return "E2";
    case Party::kE3:
      return "E3";
    case Party::kE4:
      return "E4";
  }
  return "?";
}

std::string to_string(Channel channel) {
  std::string out = to_string(channel.party);
  if (channel.index != 0) {
    out += std::to_string(channel.index);
  }
  return out;
}

std::string to_string(const ModeLabel& label) {
  return to_string(Channel{label.party, label.channel}) +
         (label.polarization == Polarization::kP0 ? "H" : "V");
}

ModeRegistry::ModeRegistry(std::vector<ModeLabel> modes) : modes_(std::move(modes)) {
  if (modes_.size() > kMaxModes) {
    throw std::invalid_argument("mode registry holds at most " + std::to_string(kMaxModes) +
                                " modes");
  }
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (modes_[i] == modes_[j]) {
        throw std::invalid_argument("duplicate mode label " + to_string(modes_[i]));
      }
    }
  }
}

std::optional<std::size_t> ModeRegistry::find(const ModeLabel& label) const {
  const auto it = std::find(modes_.begin(), modes_.end(), label);
  if (it == modes_.end()) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - modes_.begin());
}

std::size_t ModeRegistry::index_of(const ModeLabel& label) const {
  const auto index = find(label);
  if (!index) {
    throw std::invalid_argument("unknown mode " + to_string(label));
  }
  return *index;
}

ModeRegistry ModeRegistry::with_mode(const ModeLabel& label) const {
  if (contains(label)) {
    throw std::invalid_argument("duplicate mode label " + to_string(label));
  }
  std::vector<ModeLabel> modes = modes_;
  modes.push_back(label);
  return ModeRegistry(std::move(modes));
}

}  // namespace fockqkd
