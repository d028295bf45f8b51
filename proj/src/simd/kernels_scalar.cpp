#include "biharm/simd/kernels.hpp"

#include <cmath>

namespace biharm::simd {
namespace {

void stencil8_scalar(const double* u, double* out, int side, double center, double neighbor) {
  const std::size_t n = static_cast<std::size_t>(side);
  const std::size_t s3 = n, s2 = n * n, s1 = n * n * n;
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    const std::size_t p1 = ((i1 + 1) % n) * s1, m1 = ((i1 + n - 1) % n) * s1;
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const std::size_t p2 = ((i2 + 1) % n) * s2, m2 = ((i2 + n - 1) % n) * s2;
      for (std::size_t i3 = 0; i3 < n; ++i3) {
        const std::size_t p3 = ((i3 + 1) % n) * s3, m3 = ((i3 + n - 1) % n) * s3;
        const std::size_t base = i1 * s1 + i2 * s2 + i3 * s3;
        const double* r = u + base;
        const double* a = u + p1 + i2 * s2 + i3 * s3;
        const double* b = u + m1 + i2 * s2 + i3 * s3;
        const double* c = u + i1 * s1 + p2 + i3 * s3;
        const double* d = u + i1 * s1 + m2 + i3 * s3;
        const double* e = u + i1 * s1 + i2 * s2 + p3;
        const double* f = u + i1 * s1 + i2 * s2 + m3;
        double* o = out + base;
        for (std::size_t j = 0; j < n; ++j) {
          const double left = r[(j + n - 1) % n];
          const double right = r[(j + 1) % n];
          const double nb = a[j] + b[j] + c[j] + d[j] + e[j] + f[j] + left + right;
          o[j] = center * r[j] + neighbor * nb;
        }
      }
    }
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

double weighted_abs2_scalar(const double* w, const double* z, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * (z[2 * i] * z[2 * i] + z[2 * i + 1] * z[2 * i + 1]);
  return s;
}

void exp_affine_scalar(const double* x, double* out, std::size_t n, double a, double b, double scale) {
  for (std::size_t i = 0; i < n; ++i) out[i] = scale * std::exp(a * x[i] + b);
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Kernels& scalar() {
  static const Kernels k{"scalar",           stencil8_scalar,   dot_scalar, sum_scalar,
                         weighted_abs2_scalar, exp_affine_scalar, axpy_scalar};
  return k;
}

}  // namespace biharm::simd
