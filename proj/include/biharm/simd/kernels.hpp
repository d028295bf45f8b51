#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference implementation
// and (on x86-64) an AVX2+FMA variant; the variant is chosen once at runtime.
// Setting BIHARM_SIMD=scalar forces the reference path.

#include <cstddef>
#include <string_view>

namespace biharm::simd {

struct Kernels {
  std::string_view name;

  /// out[i] = center * u[i] + neighbor * (sum of the 8 axis neighbours of i)
  /// on a periodic side^4 lattice stored row-major (last axis contiguous).
  void (*stencil8)(const double* u, double* out, int side, double center, double neighbor);

  double (*dot)(const double* a, const double* b, std::size_t n);

  double (*sum)(const double* a, std::size_t n);

  /// sum_i w[i] * (z[2i]^2 + z[2i+1]^2) for interleaved complex z.
  double (*weighted_abs2)(const double* w, const double* z, std::size_t n);

  /// out[i] = scale * exp(a * x[i] + b)
  void (*exp_affine)(const double* x, double* out, std::size_t n, double a, double b, double scale);

  /// y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
};

/// The kernel set selected for this process.
const Kernels& active();

/// Reference implementations; always available.
const Kernels& scalar();

/// AVX2 implementations, or nullptr when not compiled in or not supported by the CPU.
const Kernels* avx2();

}  // namespace biharm::simd
