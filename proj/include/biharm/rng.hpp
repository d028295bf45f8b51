#pragma once

// Index-addressed standard normal variates. The value attached to
// (seed, tag, key) never depends on the order in which it is requested,
// so samplers can be parallelised and extended without changing draws.

#include <cstdint>

namespace biharm {

enum class StreamTag : std::uint32_t {
  haar = 1,
  spectral = 2,
  site = 3,
  lattice = 4,
  spectral_low = 5,
  replica = 6,
};

class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Standard normal attached to (tag, key, lane). Lane lets one key own
  /// several independent variates (e.g. real and imaginary parts).
  double normal(StreamTag tag, std::uint64_t key, std::uint32_t lane = 0) const;

  /// Uniform on (0, 1).
  double uniform(StreamTag tag, std::uint64_t key, std::uint32_t lane = 0) const;

  /// Seed of an independent child stream (e.g. Monte Carlo replica r).
  SeededStream derive(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace biharm
