#pragma once

// Conformal change g' = e^{2 phi} g on T^4: vol_{g'} = f dx with f = e^{4 phi}.
//
//   phi_bar = (2 / v') k(f) - (1 / v'^2) kk(f, f),  v' = int f
//   k_{g'}(x, y) = k(x, y) - phi_bar(x) / 2 - phi_bar(y) / 2
//   h' = h - xi,  xi = <h, f> / v'
//
// k(f) and kk(f, f) are mode sums with the biharmonic weights 1 / (2 pi^2 |n|^4);
// f is resolved on a uniform grid and checked against a grid twice as fine.

#include <functional>

#include "biharm/fields.hpp"
#include "biharm/rng.hpp"
#include "biharm/spectral_field.hpp"
#include "biharm/torus.hpp"

namespace biharm {

/// Exact product of two trigonometric polynomials (cutoff = sum of cutoffs).
SpectralField multiply(const SpectralField& a, const SpectralField& b);

/// Fourier coefficients |n|_inf <= cutoff of F(u(x)), sampled on a side^4 grid.
SpectralField compose(const SpectralField& u, const std::function<double(double)>& fn, int side, int cutoff);

class ConformalWeight {
 public:
  /// grid_side: quadrature grid per axis for e^{4 phi} (f keeps modes below grid_side / 2).
  explicit ConformalWeight(SpectralField phi, int grid_side = 16);

  const SpectralField& phi() const { return phi_; }
  /// f = e^{4 phi} as a trigonometric polynomial.
  const SpectralField& density() const { return f_; }
  const ModeList& density_modes() const { return f_modes_; }
  const SpectralField& phi_bar() const { return phi_bar_; }
  double volume() const { return volume_; }
  /// Estimated sup |f - e^{4 phi}| (aliasing + truncated modes, from a doubled grid).
  double quadrature_error() const { return quad_error_; }

  double phi_at(const TorusPoint& x) const { return phi_.evaluate(x); }
  double density_at(const TorusPoint& x) const { return f_.evaluate(x); }
  double phi_bar_at(const TorusPoint& x) const { return phi_bar_.evaluate(x); }

  /// u * f, the g'-volume density of u.
  SpectralField weighted(const SpectralField& u) const { return multiply(u, f_); }

 private:
  SpectralField phi_;
  SpectralField f_;
  ModeList f_modes_;
  SpectralField phi_bar_;
  double volume_ = 1.0;
  double quad_error_ = 0.0;
};

/// k(x, y) - phi_bar(x) / 2 - phi_bar(y) / 2; throws CoincidentPointsError for x = y.
double conformal_shift_kernel(const ConformalWeight& w, const TorusPoint& x, const TorusPoint& y);

/// kk_{g'}(u, v) = iint k_{g'} u v dvol' dvol'.
double conformal_kernel_pairing(const ConformalWeight& w, const SpectralField& u, const SpectralField& v);

/// xi = <h, f> / v' for a truncated field.
double conformal_shift(const SpectralField& h, const ConformalWeight& w);
/// Same, for the full field attached to a stream.
double conformal_shift(const SeededStream& stream, const ConformalWeight& w);

/// h' = h - xi (no longer grounded in the flat sense).
SpectralField conformal_shift_field(const SpectralField& h, const ConformalWeight& w);

/// u f as a sparse mode list together with int u f.
struct WeightedTest {
  ModeList modes;
  double mass = 0.0;
};
WeightedTest weighted_test(const ConformalWeight& w, const SpectralField& u);

/// <h', u>_{g'} = <h, u f> - xi int u f, for the field attached to a stream.
double conformal_pairing(const SeededStream& stream, double xi, const WeightedTest& u);
double conformal_pairing(const SeededStream& stream, const ConformalWeight& w, const SpectralField& u);

}  // namespace biharm
