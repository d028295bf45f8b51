#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "biharm/parallel.hpp"
#include "biharm/rng.hpp"
#include "biharm/simd/kernels.hpp"
#include "biharm/spectral_core.hpp"
#include "biharm/torus.hpp"

using namespace biharm;

namespace {

// Grounded heat kernel p_t(r) - 1: Gaussian images for small t, Fourier modes for large t.
double heat_minus_one(double t, const Vec4& r) {
  if (t < 0.05) {
    double s = 0.0;
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b)
        for (int c = -2; c <= 2; ++c)
          for (int d = -2; d <= 2; ++d) {
            const double q = std::pow(r[0] + a, 2) + std::pow(r[1] + b, 2) + std::pow(r[2] + c, 2) + std::pow(r[3] + d, 2);
            s += std::exp(-q / (4 * t));
          }
    return s / std::pow(4 * kPi * t, 2) - 1.0;
  }
  double prod = 1.0;
  for (int k = 0; k < 4; ++k) {
    double th = 1.0;
    for (int n = 1; n <= 12; ++n) th += 2 * std::exp(-kFourPiSq * n * n * t) * std::cos(kTwoPi * n * r[k]);
    prod *= th;
  }
  return prod - 1.0;
}

// int_0^inf t^{s-1} (p_t - 1) dt / Gamma(s): the grounded fractional Green kernel.
double heat_oracle(double s, const Vec4& r) {
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [&](double t) { return std::pow(t, s - 1) * heat_minus_one(t, r); };
  double v = 0.0;
  const double cuts[] = {0.0, 1e-4, 1e-3, 0.01, 0.05, 0.2, 1.0, 4.0};
  for (int i = 0; i + 1 < 8; ++i) v += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 8, 1e-13);
  return v / std::tgamma(s);
}

}  // namespace

TEST_CASE("torus distance is symmetric, periodic and at most 1") {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const TorusPoint x(u(g), u(g), u(g), u(g)), y(u(g), u(g), u(g), u(g));
    const double d = torus_distance(x, y);
    CHECK(d <= 1.0);
    CHECK(d == doctest::Approx(torus_distance(y, x)).epsilon(1e-15));
    CHECK(d == doctest::Approx(torus_distance(x.shifted(Vec4{1, -2, 0, 3}), y)).epsilon(1e-12));
  }
  CHECK(torus_distance(TorusPoint(0.9, 0, 0, 0), TorusPoint(0.1, 0, 0, 0)) == doctest::Approx(0.2));
  CHECK(torus_distance(TorusPoint(0.5, 0.5, 0.5, 0.5), TorusPoint(0, 0, 0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("seeded stream is addressable and roughly standard normal") {
  const SeededStream s(42);
  CHECK(s.normal(StreamTag::haar, 17, 2) == s.normal(StreamTag::haar, 17, 2));
  CHECK(s.normal(StreamTag::haar, 17, 2) != s.normal(StreamTag::haar, 17, 3));
  CHECK(s.normal(StreamTag::haar, 17) != s.normal(StreamTag::site, 17));
  CHECK(s.derive(1).seed() != s.derive(2).seed());
  CHECK(s.derive(1).seed() == SeededStream(42).derive(1).seed());
  const int n = 200000;
  double m1 = 0, m2 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal(StreamTag::replica, static_cast<std::uint64_t>(i));
    m1 += z, m2 += z * z, m4 += z * z * z * z;
  }
  CHECK(std::abs(m1 / n) < 5 * std::sqrt(1.0 / n));
  CHECK(std::abs(m2 / n - 1) < 5 * std::sqrt(2.0 / n));
  CHECK(std::abs(m4 / n - 3) < 5 * std::sqrt(96.0 / n));
}

TEST_CASE("parallel_for visits each index once for any worker count") {
  for (unsigned t : {1u, 2u, 5u}) {
    set_thread_count(t);
    std::vector<int> hit(1001, 0);
    parallel_for(0, hit.size(), [&](std::size_t i) { hit[i] += 1; });
    for (int h : hit) CHECK(h == 1);
  }
  set_thread_count(0);
}

TEST_CASE("simd kernels match the scalar reference") {
  const simd::Kernels* v = simd::avx2();
  if (!v) {
    MESSAGE("AVX2 not available; only the scalar path is exercised");
    return;
  }
  const simd::Kernels& s = simd::scalar();
  std::mt19937_64 g(9);
  std::normal_distribution<double> nd;
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    std::vector<double> a(2 * n), b(2 * n), w(n);
    for (auto& x : a) x = nd(g);
    for (auto& x : b) x = nd(g);
    for (auto& x : w) x = std::abs(nd(g));
    CHECK(v->dot(a.data(), b.data(), n) == doctest::Approx(s.dot(a.data(), b.data(), n)).epsilon(1e-13));
    CHECK(v->sum(a.data(), n) == doctest::Approx(s.sum(a.data(), n)).epsilon(1e-13));
    CHECK(v->weighted_abs2(w.data(), a.data(), n) == doctest::Approx(s.weighted_abs2(w.data(), a.data(), n)).epsilon(1e-13));
    std::vector<double> e1(n), e2(n);
    s.exp_affine(a.data(), e1.data(), n, 1.3, -0.4, 0.7);
    v->exp_affine(a.data(), e2.data(), n, 1.3, -0.4, 0.7);
    for (std::size_t i = 0; i < n; ++i) CHECK(e2[i] == doctest::Approx(e1[i]).epsilon(1e-14));
    std::vector<double> y1(b.begin(), b.begin() + n), y2 = y1;
    s.axpy(0.3, a.data(), y1.data(), n);
    v->axpy(0.3, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-15));
  }
  for (int side : {2, 4, 8}) {
    const std::size_t m = static_cast<std::size_t>(side) * side * side * side;
    std::vector<double> u(m), o1(m), o2(m);
    for (auto& x : u) x = nd(g);
    s.stencil8(u.data(), o1.data(), side, 2.0, -0.25);
    v->stencil8(u.data(), o2.data(), side, 2.0, -0.25);
    for (std::size_t i = 0; i < m; ++i) CHECK(o2[i] == doctest::Approx(o1[i]).epsilon(1e-14));
  }
}

TEST_CASE("green kernel matches an independent heat-kernel integral") {
  const Vec4 offs[] = {{0.3, 0.1, -0.2, 0.05}, {0.5, 0.5, 0.5, 0.5}, {0.02, 0.0, 0.01, 0.0}};
  for (const Vec4& r : offs) {
    const TorusPoint x(0.1, 0.2, 0.3, 0.4);
    const KernelValue g = green_kernel(x, x.shifted(r));
    CHECK(g.value == doctest::Approx(heat_oracle(1.0, r)).epsilon(1e-8));
    const KernelValue k = biharmonic_kernel(x, x.shifted(r));
    CHECK(k.value == doctest::Approx(kEightPiSq * heat_oracle(2.0, r)).epsilon(1e-8));
    CHECK(g.error_bound < 1e-9);
  }
  CHECK_THROWS_AS(green_kernel(TorusPoint(0.1, 0, 0, 0), TorusPoint(0.1, 0, 0, 0)), CoincidentPointsError);
}

TEST_CASE("fractional kernel at s=3 on the diagonal") {
  // G^(3)(0,0) = sum_{n != 0} (4 pi^2 |n|^2)^{-3}, an absolutely convergent lattice sum
  double s = 0.0;
  const int N = 40;
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b)
      for (int c = -N; c <= N; ++c)
        for (int d = -N; d <= N; ++d) {
          const int q = a * a + b * b + c * c + d * d;
          if (q) s += 1.0 / (double(q) * q * q);
        }
  s /= std::pow(kFourPiSq, 3);
  // tail beyond the cube |n|_inf <= 40 is below 2 pi^2 int_40^inf r^-3 dr / (4 pi^2)^3
  const double tail = kPi * kPi / (N * N) / std::pow(kFourPiSq, 3);
  const double v = fractional_green_at_offset(3.0, Vec4{}).value;
  CHECK(v == doctest::Approx(0.00024102138353).epsilon(1e-10));
  CHECK(v >= s);
  CHECK(v <= s + tail);
}

TEST_CASE("biharmonic kernel grows like -log d") {
  const TorusPoint x(0.2, 0.7, 0.1, 0.5);
  const Vec4 e{0.5, 0.5, 0.5, 0.5};
  double prev = -1e9;
  for (double d : {0.1, 0.01, 0.001}) {
    Vec4 r = e;
    for (auto& v : r) v *= d;
    const double k = biharmonic_kernel(x, x.shifted(r)).value;
    CHECK(k > prev);
    prev = k;
  }
  Vec4 a = e, b = e;
  for (auto& v : a) v *= 1e-3;
  for (auto& v : b) v *= 1e-4;
  CHECK(biharmonic_kernel(x, x.shifted(b)).value - biharmonic_kernel(x, x.shifted(a)).value == doctest::Approx(std::log(10.0)).epsilon(1e-4));
}
