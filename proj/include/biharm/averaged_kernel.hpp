#pragma once

// Fractional Green kernels averaged over axis-aligned cubes.
//
// For window widths a >= b >= 0 (0 means a point) the value at offset delta is
//   (1/Gamma(s)) int_0^inf tau^{s-1} (prod_k F(tau; delta_k) - 1) dtau,
//   F(tau; d) = sum_j exp(-4 pi^2 j^2 tau) sinc(pi j a) sinc(pi j b) cos(2 pi j d),
// i.e. the double average of G^(s) over a cube of side a and one of side b whose
// centres differ by delta. F is evaluated as a Fourier series for large tau and
// as a smoothed trapezoid profile for small tau; the tau integral uses fixed
// Gauss-Legendre nodes on geometric pieces, so whole lattice tables share nodes.

#include <cstddef>
#include <memory>
#include <vector>

#include "biharm/torus.hpp"

namespace biharm {

struct Window {
  double a = 0.0;
  double b = 0.0;
};

class AveragedKernel {
 public:
  AveragedKernel(double s, Window w);

  double order() const { return s_; }
  Window window() const { return w_; }

  double operator()(const Vec4& delta) const;

  /// Per-axis factor F(tau_i; d) - [tau_i large] at every node; used to batch.
  std::vector<double> axis_profile(double d) const;
  /// Combines four axis profiles into the kernel value.
  double combine(const double* f0, const double* f1, const double* f2, const double* f3) const;
  std::size_t node_count() const { return tau_.size(); }

 private:
  double s_;
  Window w_;
  std::vector<double> tau_;
  std::vector<double> weight_;   // GL weight * tau^{s-1} / Gamma(s)
  std::vector<char> fourier_;    // node uses the Fourier form (stores F - 1)
  double remainder_point_diag_;  // analytic contribution of [0, tau_min] for a point on the diagonal
};

/// Values of an averaged kernel on the periodic lattice delta = i / side + shift.
/// Entries are row-major over i in [0, side)^4.
class LatticeKernelTable {
 public:
  LatticeKernelTable(double s, Window w, int side, double shift = 0.0);

  int side() const { return side_; }
  const std::vector<double>& values() const { return values_; }
  double at(std::size_t idx) const { return values_[idx]; }

 private:
  int side_;
  std::vector<double> values_;
};

/// Process-wide cache of lattice tables; tables are immutable once built.
std::shared_ptr<const LatticeKernelTable> lattice_table(double s, Window w, int side, double shift = 0.0);

}  // namespace biharm
