#pragma once

// Real values on the 2^{4l} cells (or sites) of level l, row-major with
// alpha_1 slowest: idx = ((a1 * n + a2) * n + a3) * n + a4, n = 2^l.

#include <array>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace biharm {

using MultiIndex = std::array<int, 4>;

inline std::size_t level_side(int level) { return std::size_t{1} << level; }
inline std::size_t level_size(int level) {
  const std::size_t n = level_side(level);
  return n * n * n * n;
}

inline std::size_t linear_index(const MultiIndex& a, std::size_t n) {
  return ((static_cast<std::size_t>(a[0]) * n + a[1]) * n + a[2]) * n + a[3];
}

inline MultiIndex multi_index(std::size_t idx, std::size_t n) {
  MultiIndex a;
  for (int k = 3; k >= 0; --k) {
    a[k] = static_cast<int>(idx % n);
    idx /= n;
  }
  return a;
}

template <class Tag>
class LevelArray {
 public:
  LevelArray() = default;
  explicit LevelArray(int level, bool grounded = false)
      : level_(level), grounded_(grounded), values_(level_size(check(level)), 0.0) {}
  LevelArray(int level, std::vector<double> values, bool grounded = false)
      : level_(level), grounded_(grounded), values_(std::move(values)) {
    if (values_.size() != level_size(check(level))) throw std::invalid_argument("value count does not match level");
  }

  int level() const { return level_; }
  std::size_t side() const { return level_side(level_); }
  std::size_t size() const { return values_.size(); }
  bool grounded() const { return grounded_; }
  void set_grounded(bool g) { grounded_ = g; }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& at(const MultiIndex& a) { return values_[linear_index(a, side())]; }
  double at(const MultiIndex& a) const { return values_[linear_index(a, side())]; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double mean() const {
    return values_.empty() ? 0.0 : std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
  }
  /// Subtracts the mean and marks the array grounded.
  void ground() {
    const double m = mean();
    for (double& v : values_) v -= m;
    grounded_ = true;
  }

 private:
  static int check(int level) {
    if (level < 0 || level > 8) throw std::invalid_argument("level out of range [0, 8]");
    return level;
  }

  int level_ = 0;
  bool grounded_ = false;
  std::vector<double> values_;
};

struct CellTag {};
struct SiteTag {};

/// Piecewise-constant function on the level-l dyadic cubes.
using GridField = LevelArray<CellTag>;
/// Function on the discrete torus (2^{-l} Z^4) / Z^4.
using DiscreteField = LevelArray<SiteTag>;

}  // namespace biharm
