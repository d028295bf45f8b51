#pragma once

// Thin wrapper over FFTW for periodic side^4 arrays (row-major, last axis fastest).
// forward: X(m) = sum_i x(i) exp(-2 pi i m.i / side); inverse uses +; neither scales.

#include <complex>
#include <vector>

namespace biharm {

using cplx = std::complex<double>;

class Fft4 {
 public:
  explicit Fft4(int side);
  ~Fft4();
  Fft4(const Fft4&) = delete;
  Fft4& operator=(const Fft4&) = delete;

  int side() const { return side_; }
  std::size_t size() const { return size_; }

  void forward(std::vector<cplx>& data) const;
  void inverse(std::vector<cplx>& data) const;

  /// Real input convenience; returns the full complex spectrum.
  std::vector<cplx> forward_real(const std::vector<double>& x) const;
  /// Real part of the unscaled inverse.
  std::vector<double> inverse_real(std::vector<cplx> spectrum) const;

 private:
  int side_;
  std::size_t size_;
  void* fwd_;
  void* inv_;
};

/// Shared plan for a given side; plans are created once per process.
const Fft4& fft_for_side(int side);

}  // namespace biharm
