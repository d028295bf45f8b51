// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma;
// nothing here may run before dispatch has confirmed CPU support.

#include "biharm/simd/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>
#include <cstdint>

namespace biharm::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void stencil8_avx2(const double* u, double* out, int side, double center, double neighbor) {
  const std::size_t n = static_cast<std::size_t>(side);
  const std::size_t s3 = n, s2 = n * n, s1 = n * n * n;
  const __m256d vc = _mm256_set1_pd(center);
  const __m256d vn = _mm256_set1_pd(neighbor);
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
        auto edge = [&](std::size_t j) {
          const double nb = a[j] + b[j] + c[j] + d[j] + e[j] + f[j] + r[(j + n - 1) % n] + r[(j + 1) % n];
          o[j] = center * r[j] + neighbor * nb;
        };
        if (n < 8) {
          for (std::size_t j = 0; j < n; ++j) edge(j);
          continue;
        }
        edge(0);
        std::size_t j = 1;
        for (; j + 4 <= n - 1; j += 4) {
          __m256d acc = _mm256_add_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j));
          acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_loadu_pd(c + j), _mm256_loadu_pd(d + j)));
          acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_loadu_pd(e + j), _mm256_loadu_pd(f + j)));
          acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_loadu_pd(r + j - 1), _mm256_loadu_pd(r + j + 1)));
          __m256d res = _mm256_fmadd_pd(vn, acc, _mm256_mul_pd(vc, _mm256_loadu_pd(r + j)));
          _mm256_storeu_pd(o + j, res);
        }
        for (; j < n; ++j) edge(j);
      }
    }
  }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_add_pd(s0, _mm256_loadu_pd(a + i));
    s1 = _mm256_add_pd(s1, _mm256_loadu_pd(a + i + 4));
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i];
  return s;
}

double weighted_abs2_avx2(const double* w, const double* z, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // z holds (re0, im0, re1, im1 | re2, im2, re3, im3)
    __m256d z01 = _mm256_loadu_pd(z + 2 * i);
    __m256d z23 = _mm256_loadu_pd(z + 2 * i + 4);
    __m256d sq01 = _mm256_mul_pd(z01, z01);
    __m256d sq23 = _mm256_mul_pd(z23, z23);
    // hadd gives (|z0|^2, |z2|^2, |z1|^2, |z3|^2)
    __m256d mag = _mm256_hadd_pd(sq01, sq23);
    mag = _mm256_permute4x64_pd(mag, 0b11011000);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), mag, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * (z[2 * i] * z[2 * i] + z[2 * i + 1] * z[2 * i + 1]);
  return s;
}

// exp via Cody-Waite reduction x = k ln2 + r, |r| <= ln2/2, and a degree-12
// Taylor polynomial for e^r (truncation below 2e-16 relative).
inline __m256d exp_pd(__m256d x) {
  const __m256d hi = _mm256_set1_pd(709.0);
  const __m256d lo = _mm256_set1_pd(-708.0);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
  r = _mm256_fnmadd_pd(k, ln2_lo, r);

  static constexpr double c[13] = {1.0,
                                   1.0,
                                   1.0 / 2,
                                   1.0 / 6,
                                   1.0 / 24,
                                   1.0 / 120,
                                   1.0 / 720,
                                   1.0 / 5040,
                                   1.0 / 40320,
                                   1.0 / 362880,
                                   1.0 / 3628800,
                                   1.0 / 39916800,
                                   1.0 / 479001600};
  __m256d p = _mm256_set1_pd(c[12]);
  for (int i = 11; i >= 0; --i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[i]));

  // 2^k by building the exponent field; k + 2^52 + 2^51 puts k in the low mantissa bits.
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  __m256i ki = _mm256_castpd_si256(_mm256_add_pd(k, magic));
  ki = _mm256_sub_epi64(ki, _mm256_castpd_si256(magic));
  __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(ki, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

void exp_affine_avx2(const double* x, double* out, std::size_t n, double a, double b, double scale) {
  const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b), vs = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d arg = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vb);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, exp_pd(arg)));
  }
  for (; i < n; ++i) out[i] = scale * std::exp(a * x[i] + b);
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Kernels* avx2_compiled() {
  static const Kernels k{"avx2",          stencil8_avx2,   dot_avx2, sum_avx2,
                         weighted_abs2_avx2, exp_affine_avx2, axpy_avx2};
  return &k;
}

}  // namespace biharm::simd

#else

namespace biharm::simd {
const Kernels* avx2_compiled() { return nullptr; }
}  // namespace biharm::simd

#endif
