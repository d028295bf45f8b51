#pragma once

// Isotropic Haar system on T^4: 15 functions per dyadic cube, tensor products
// of 1-D box and step factors, each of magnitude 2^{2l} on its cube.

#include <cstdint>
#include <functional>
#include <vector>

#include "biharm/grid.hpp"
#include "biharm/torus.hpp"

namespace biharm {

struct DyadicCube {
  int level = 0;
  MultiIndex alpha{};

  double edge() const { return std::ldexp(1.0, -level); }
  double volume() const { return std::ldexp(1.0, -4 * level); }
  TorusPoint anchor() const;
  TorusPoint center() const;
  bool contains(const TorusPoint& x) const;
};

/// The unique level-l cube containing x (half-open convention).
DyadicCube cube_of(const TorusPoint& x, int level);

struct HaarIndex {
  int level = 0;
  MultiIndex alpha{};
  std::array<int, 4> beta{};  // in {0,1}^4, not all zero

  /// 8 b1 + 4 b2 + 2 b3 + b4, in 1..15.
  int beta_code() const { return 8 * beta[0] + 4 * beta[1] + 2 * beta[2] + beta[3]; }
  /// Position among all indices of levels 0, 1, ...: offset(l) + 15 * rank(alpha) + code - 1.
  std::uint64_t global() const;
  static HaarIndex from_global(std::uint64_t g);

  friend bool operator==(const HaarIndex&, const HaarIndex&) = default;
};

/// Number of Haar functions of levels < l: sum 15 * 2^{4k} = 2^{4l} - 1.
std::uint64_t haar_count_below(int level);

/// All indices of one level in lexicographic (alpha, beta) order.
std::vector<HaarIndex> enumerate_indices(int level);

double haar_eval(const HaarIndex& idx, const TorusPoint& x);

/// Exact L^2 pairing of a Haar function with a grid field of finer level.
double haar_inner(const HaarIndex& idx, const GridField& u);

/// Cube averages at a coarser (or equal) level by exact cell sums.
GridField project_piecewise(const GridField& u, int level);

/// Cube averages of a function by a midpoint rule with `sub`^4 nodes per cube.
GridField project_function(const std::function<double(const TorusPoint&)>& f, int level, int sub = 4);

/// Coefficients <u, eta> for all Haar functions of levels < u.level(), indexed
/// by HaarIndex::global(). The mean of u is ignored.
std::vector<double> haar_coefficients(const GridField& u);

/// Inverse of haar_coefficients: the grounded level-L field with given coefficients.
GridField haar_reconstruct(const std::vector<double>& coeffs, int level);

}  // namespace biharm
