#pragma once

#include <cstdint>

namespace fockqkd {

// splitmix64 stream. Uniform doubles are built from the top 53 bits so that draws
// are identical across standard libraries (std::uniform_real_distribution is not).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  // Independent stream `index` derived from a master seed; used to give every
  // protocol round its own generator regardless of evaluation order.
  static RandomStream derive(std::uint64_t master_seed, std::uint64_t index) {
    RandomStream mixer(master_seed ^ 0x6A09E667F3BCC909ULL);
    const std::uint64_t base = mixer.next_u64();
    RandomStream child(base ^ mix(index + 0x9E3779B97F4A7C15ULL));
    child.next_u64();
    return child;
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool coin() { return (next_u64() >> 63) != 0; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace fockqkd
