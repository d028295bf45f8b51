#pragma once

// Points, offsets and frequency labels on the flat torus T^4 = R^4 / Z^4.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>

namespace biharm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;
inline constexpr double kEightPiSq = 8.0 * std::numbers::pi * std::numbers::pi;
inline constexpr int kDim = 4;

using Vec4 = std::array<double, 4>;

/// Reduce a real number into [0, 1).
inline double wrap_unit(double v) {
  double r = v - std::floor(v);
  return r >= 1.0 ? 0.0 : r;
}

/// Reduce a real number into [-1/2, 1/2).
inline double wrap_centered(double v) {
  double r = v - std::floor(v + 0.5);
  return r >= 0.5 ? r - 1.0 : r;
}

class TorusPoint {
 public:
  TorusPoint() = default;
  TorusPoint(double x1, double x2, double x3, double x4) : TorusPoint(Vec4{x1, x2, x3, x4}) {}
  explicit TorusPoint(const Vec4& x) {
    for (int k = 0; k < kDim; ++k) x_[k] = wrap_unit(x[k]);
  }

  double operator[](int k) const { return x_[k]; }
  const Vec4& coords() const { return x_; }

  /// Translate by an arbitrary real vector (result re-wrapped).
  TorusPoint shifted(const Vec4& v) const {
    Vec4 y;
    for (int k = 0; k < kDim; ++k) y[k] = x_[k] + v[k];
    return TorusPoint(y);
  }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  Vec4 x_{};
};

/// Componentwise x - y reduced into [-1/2, 1/2)^4: the shortest representative.
inline Vec4 minimal_offset(const TorusPoint& x, const TorusPoint& y) {
  Vec4 r;
  for (int k = 0; k < kDim; ++k) r[k] = wrap_centered(x[k] - y[k]);
  return r;
}

inline double norm2(const Vec4& r) { return r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3]; }

/// Geodesic distance of the flat torus: min over m in Z^4 of |x - y + m|.
inline double torus_distance(const TorusPoint& x, const TorusPoint& y) {
  return std::sqrt(norm2(minimal_offset(x, y)));
}

/// Integer frequency label n; -Delta e_n = 4 pi^2 |n|^2 e_n.
struct FrequencyVector {
  std::array<int, 4> n{};

  int norm2() const { return n[0] * n[0] + n[1] * n[1] + n[2] * n[2] + n[3] * n[3]; }
  int sup_norm() const {
    int m = 0;
    for (int v : n) m = std::max(m, std::abs(v));
    return m;
  }
  bool is_zero() const { return n[0] == 0 && n[1] == 0 && n[2] == 0 && n[3] == 0; }
  double laplace_eigenvalue() const { return kFourPiSq * norm2(); }
  FrequencyVector operator-() const { return {{-n[0], -n[1], -n[2], -n[3]}}; }
  int operator[](int k) const { return n[k]; }

  /// Stable 64-bit key, independent of any truncation; used to address random streams.
  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (int v : n) k = (k << 16) | static_cast<std::uint16_t>(static_cast<std::int16_t>(v));
    return k;
  }

  friend bool operator==(const FrequencyVector&, const FrequencyVector&) = default;
};

}  // namespace biharm
