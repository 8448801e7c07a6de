#pragma once

#include <cstdint>

namespace dgsp::rng {

/// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Counter-based random stream: word(i) is a pure function of (key, i), so
/// any draw can be evaluated out of order, replayed, and split across
/// threads without changing results.
///
/// A stream owner commits to one addressing scheme: uniform01(i) and
/// normal(i) overlap in counter space (normal consumes the words at 2i and
/// 2i+1), so code that needs both takes separate substreams.
class Stream {
public:
  explicit Stream(std::uint64_t key) : key_(key) {}

  std::uint64_t key() const { return key_; }

  std::uint64_t word(std::uint64_t i) const {
    return mix64(key_ + (i + 1) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01(std::uint64_t i) const {
    return static_cast<double>(word(i) >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; consumes words 2i and 2i+1.
  double normal(std::uint64_t i) const;

  /// Uniform index in [0, n).
  std::uint64_t index_below(std::uint64_t i, std::uint64_t n) const;

  /// Independent child stream; substream(i) != substream(j) for i != j.
  Stream substream(std::uint64_t i) const {
    return Stream(mix64(key_ ^ ((i + 1) * 0xd1342543de82ef95ULL)));
  }

private:
  std::uint64_t key_;
};

/// Root stream for a user-visible seed.
inline Stream root(std::uint64_t seed) { return Stream(mix64(seed)); }

}  // namespace dgsp::rng
