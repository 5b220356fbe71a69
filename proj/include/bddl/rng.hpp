#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace bddl {

// xoshiro256** seeded through splitmix64. Portable and serializable, so
// seeded runs reproduce bit-for-bit across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform in [0, n); n must be positive.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  bool coin() { return (next() >> 63) != 0; }

  std::string state() const;
  static Rng from_state(const std::string& text);

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> state_{};
};

inline std::string Rng::state() const {
  std::string out;
  char buf[17];
  for (std::size_t i = 0; i < state_.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(state_[i]));
    if (i) out += ':';
    out += buf;
  }
  return out;
}

inline Rng Rng::from_state(const std::string& text) {
  Rng r;
  std::size_t pos = 0;
  for (auto& word : r.state_) {
    if (pos >= text.size()) throw std::invalid_argument("malformed rng state");
    std::size_t used = 0;
    word = std::stoull(text.substr(pos, 16), &used, 16);
    if (used != 16) throw std::invalid_argument("malformed rng state");
    pos += 17;
  }
  return r;
}

}  // namespace bddl
