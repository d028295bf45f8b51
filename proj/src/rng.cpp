#include "biharm/rng.hpp"

#include <cmath>

#include "biharm/torus.hpp"

namespace biharm {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t hash3(std::uint64_t seed, std::uint64_t tag, std::uint64_t key, std::uint64_t lane) {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  h = mix64(h ^ (tag << 32 | lane));
  h = mix64(h ^ key);
  return h;
}

// 53 random bits mapped to (0, 1); zero is impossible.
double to_open_unit(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

}  // namespace

double SeededStream::uniform(StreamTag tag, std::uint64_t key, std::uint32_t lane) const {
  return to_open_unit(hash3(seed_, static_cast<std::uint64_t>(tag), key, lane));
}

double SeededStream::normal(StreamTag tag, std::uint64_t key, std::uint32_t lane) const {
  // Box-Muller on two hashed uniforms; only the cosine branch is used so each
  // (tag, key, lane) owns its own pair.
  const std::uint64_t t = static_cast<std::uint64_t>(tag);
  const std::uint64_t h1 = hash3(seed_, t, key, 2u * lane);
  const std::uint64_t h2 = hash3(seed_, t, key, 2u * lane + 1u);
  const double u1 = to_open_unit(h1);
  const double u2 = to_open_unit(h2);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

SeededStream SeededStream::derive(std::uint64_t index) const {
  return SeededStream(hash3(seed_, static_cast<std::uint64_t>(StreamTag::replica), index, 0));
}

}  // namespace biharm
