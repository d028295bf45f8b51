#pragma once

// Real-valued trigonometric polynomial on T^4 stored by its Fourier
// coefficients c(n) for |n|_inf <= N. u(x) = sum_n c(n) e^{2 pi i n.x}.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "biharm/torus.hpp"

namespace biharm {

class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(int cutoff, bool grounded = true);

  int cutoff() const { return cutoff_; }
  int side() const { return 2 * cutoff_ + 1; }
  std::size_t size() const { return coeffs_.size(); }
  bool grounded() const { return grounded_; }

  bool contains(const FrequencyVector& n) const { return n.sup_norm() <= cutoff_; }
  std::complex<double> operator()(const FrequencyVector& n) const;

  /// Sets c(n) and c(-n) = conj(c(n)); c(0) must be real and is refused when grounded.
  void set(const FrequencyVector& n, std::complex<double> value);

  /// Raw storage, index ((n1+N)*S + (n2+N))*S... with S = 2N+1.
  const std::vector<std::complex<double>>& coefficients() const { return coeffs_; }
  std::vector<std::complex<double>>& coefficients() { return coeffs_; }
  std::size_t index_of(const FrequencyVector& n) const;
  FrequencyVector frequency_at(std::size_t idx) const;

  double evaluate(const TorusPoint& x) const;
  /// L^2 inner product <u, v> = sum c_u(n) conj(c_v(n)) (real for real fields).
  double inner(const SpectralField& other) const;
  double max_hermitian_defect() const;

  void for_each_mode(const std::function<void(const FrequencyVector&, std::complex<double>&)>& fn);
  void for_each_mode(const std::function<void(const FrequencyVector&, std::complex<double>)>& fn) const;

  /// cos(2 pi n.x) for the given n (grounded when n != 0).
  static SpectralField cosine_mode(const FrequencyVector& n, int cutoff, double amplitude = 1.0);

 private:
  int cutoff_ = 0;
  bool grounded_ = true;
  std::vector<std::complex<double>> coeffs_;
};

}  // namespace biharm
