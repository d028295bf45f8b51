#pragma once

// Continuum kernels on the flat 4-torus and quadratic forms of spectral fields.
// lambda(n) = 4 pi^2 |n|^2 throughout.

#include <stdexcept>

#include "biharm/spectral_field.hpp"
#include "biharm/torus.hpp"

namespace biharm {

struct KernelValue {
  double value = 0.0;
  double error_bound = 0.0;
};

class CoincidentPointsError : public std::domain_error {
 public:
  CoincidentPointsError() : std::domain_error("kernel is singular at coincident points") {}
};

/// Grounded heat kernel with a cube cutoff |n|_inf <= N.
double grounded_heat_kernel(double t, const TorusPoint& x, const TorusPoint& y, int cutoff = 32);

/// Grounded Green kernel of -Delta (Ewald split at t0 = 1/(2 pi)).
KernelValue green_kernel(const TorusPoint& x, const TorusPoint& y);

/// sum_{n != 0} cos(2 pi n.r) lambda(n)^{-s}; finite on the diagonal only for s > 2.
KernelValue fractional_green_kernel(double s, const TorusPoint& x, const TorusPoint& y);

/// k = 8 pi^2 G^(2); covariance of the biharmonic field.
KernelValue biharmonic_kernel(const TorusPoint& x, const TorusPoint& y);

/// Same kernels as functions of the offset r = x - y (any representative).
KernelValue fractional_green_at_offset(double s, const Vec4& r);

/// Mode weight of the biharmonic kernel, 1 / (2 pi^2 |n|^4); zero at n = 0.
double biharmonic_weight(const FrequencyVector& n);

/// (1/8 pi^2) int (Delta u)^2 = (1/8 pi^2) sum lambda^2 |c|^2.
double paneitz_energy(const SpectralField& u);

/// (sum_n lambda^s |c|^2)^{1/2}; n = 0 enters only when s == 0.
double sobolev_norm(const SpectralField& u, double s);

/// Covariance form kk(u, v) = sum c_u conj(c_v) / (2 pi^2 |n|^4) over n != 0.
double biharmonic_pairing(const SpectralField& u, const SpectralField& v);

/// Multiplies every coefficient by lambda^{-s}; result grounded.
SpectralField apply_green_power(const SpectralField& u, double s);

enum class KernelKind { green, biharmonic, fractional, heat };

/// Per-mode weights of a translation-invariant kernel, truncated at |n|_inf <= N.
class KernelTable {
 public:
  KernelTable(KernelKind kind, int cutoff, double parameter = 0.0);

  KernelKind kind() const { return kind_; }
  int cutoff() const { return cutoff_; }
  double parameter() const { return parameter_; }
  double weight(const FrequencyVector& n) const;
  /// Truncated Fourier sum at x - y.
  double evaluate(const TorusPoint& x, const TorusPoint& y) const;

 private:
  KernelKind kind_;
  int cutoff_;
  double parameter_;
};

}  // namespace biharm
