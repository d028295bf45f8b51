#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "biharm/fields.hpp"
#include "biharm/haar.hpp"
#include "biharm/spectral_core.hpp"

using namespace biharm;

namespace {

GridField random_grid(int level, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> nd;
  GridField u(level);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = nd(g);
  return u;
}

}  // namespace

TEST_CASE("haar global index is a bijection") {
  std::set<std::uint64_t> seen;
  for (int l = 0; l <= 2; ++l)
    for (const HaarIndex& h : enumerate_indices(l)) {
      const std::uint64_t g = h.global();
      CHECK(g < haar_count_below(l + 1));
      CHECK(g >= haar_count_below(l));
      CHECK(HaarIndex::from_global(g) == h);
      seen.insert(g);
    }
  CHECK(seen.size() == haar_count_below(3));
  CHECK(haar_count_below(3) == 4095);
}

TEST_CASE("haar functions are orthonormal and grounded") {
  std::vector<HaarIndex> all;
  for (int l = 0; l <= 1; ++l)
    for (const auto& h : enumerate_indices(l)) all.push_back(h);
  // sample each function on the level-2 grid (exact: piecewise constant there)
  std::vector<GridField> f;
  for (const auto& h : all) {
    GridField u(2);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = haar_eval(h, DyadicCube{2, multi_index(i, 4)}.center());
    f.push_back(u);
  }
  for (std::size_t a = 0; a < all.size(); a += 7) {
    CHECK(std::abs(f[a].mean()) < 1e-14);
    for (std::size_t b = 0; b < all.size(); ++b) {
      double ip = 0.0;
      for (std::size_t i = 0; i < f[a].size(); ++i) ip += f[a][i] * f[b][i];
      ip /= static_cast<double>(f[a].size());
      CHECK(ip == doctest::Approx(a == b ? 1.0 : 0.0));
      CHECK(haar_inner(all[b], f[a]) == doctest::Approx(ip).epsilon(1e-12));
    }
  }
}

TEST_CASE("haar reconstruction inverts the coefficient map on grounded fields") {
  GridField u = random_grid(3, 5);
  u.ground();
  const GridField v = haar_reconstruct(haar_coefficients(u), 3);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(v[i] == doctest::Approx(u[i]).epsilon(1e-12));
}

TEST_CASE("piecewise projection satisfies the tower identity") {
  const GridField u = random_grid(4, 11);
  const GridField a = project_piecewise(project_piecewise(u, 3), 2);
  const GridField b = project_piecewise(u, 2);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-13);
}

TEST_CASE("spectral sample is hermitian, grounded and reproducible") {
  const SeededStream s(7);
  const SpectralField u = sample_spectral_field(6, s);
  CHECK(u.max_hermitian_defect() == 0.0);
  CHECK(std::abs(u(FrequencyVector{})) == 0.0);
  const SpectralField v = sample_spectral_field(6, s);
  CHECK(u.inner(v) == u.inner(u));
  // the low modes of a larger cutoff agree with a smaller cutoff
  const SpectralField w = sample_spectral_field(9, s);
  const FrequencyVector n{{2, -1, 0, 3}};
  CHECK(w(n) == u(n));
}

TEST_CASE("spectral pairing variance is the kernel pairing") {
  const SpectralField u = SpectralField::cosine_mode(FrequencyVector{{1, 1, 0, 0}}, 2, 1.0);
  const double exact = biharmonic_pairing(u, u);
  CHECK(exact == doctest::Approx(0.5 * biharmonic_weight(FrequencyVector{{1, 1, 0, 0}})).epsilon(1e-12));
  const ModeList modes = nonzero_modes(u);
  const int n = 20000;
  double m2 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    const double p = spectral_pairing(SeededStream(3).derive(i), modes);
    m2 += p * p, m4 += p * p * p * p;
  }
  m2 /= n, m4 /= n;
  const double se = std::sqrt((m4 - m2 * m2) / n);
  CHECK(std::abs(m2 - exact) < 4 * se);
}

TEST_CASE("k_l(0) matches a brute-force mode sum") {
  // k_l(0) = sum_{n != 0} prod_k sinc^2(pi n_k 2^-l) / (2 pi^2 |n|^4)
  for (int l : {1, 2}) {
    const int N = 48;
    std::vector<double> s2(2 * N + 1);
    for (int a = -N; a <= N; ++a) {
      const double x = kPi * a * std::ldexp(1.0, -l);
      s2[a + N] = a == 0 ? 1.0 : std::pow(std::sin(x) / x, 2);
    }
    double s = 0.0;
    for (int a = -N; a <= N; ++a)
      for (int b = -N; b <= N; ++b)
        for (int c = -N; c <= N; ++c)
          for (int d = -N; d <= N; ++d) {
            const double q = a * a + b * b + c * c + d * d;
            if (q > 0) s += s2[a + N] * s2[b + N] * s2[c + N] * s2[d + N] / (q * q);
          }
    s /= 2 * kPi * kPi;
    CHECK(cube_covariance_lattice(l)[0] == doctest::Approx(s).epsilon(2e-4));
  }
  // roughly log 2 per level
  const double d = cube_covariance_lattice(6)[0] - cube_covariance_lattice(5)[0];
  CHECK(d == doctest::Approx(std::log(2.0)).epsilon(0.01));
}

TEST_CASE("cube average sampler reproduces the k_l covariance") {
  const int l = 2;
  const CubeAverageSampler cs(l);
  const auto& row = cube_covariance_lattice(l);
  const int n = 4000;
  double v0 = 0.0, v1 = 0.0;
  for (int i = 0; i < n; ++i) {
    const GridField h = cs.sample(SeededStream(21).derive(i));
    CHECK(std::abs(h.mean()) < 1e-9);
    v0 += h[0] * h[0];
    v1 += h[0] * h[1];
  }
  v0 /= n, v1 /= n;
  CHECK(std::abs(v0 - row[0]) < 5 * row[0] * std::sqrt(2.0 / n));
  CHECK(std::abs(v1 - row[1]) < 5 * row[0] * std::sqrt(2.0 / n));
}

TEST_CASE("haar-driven field covariance at one point") {
  const int l = 2;
  const TorusPoint x(0.13, 0.37, 0.71, 0.52);
  const double exact = covariance_hat(l, x, x);
  const int n = 3000;
  double m2 = 0.0, m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = HaarFieldSample(l, SeededStream(5).derive(i)).evaluate(x);
    m2 += v * v, m4 += v * v * v * v;
  }
  m2 /= n, m4 /= n;
  CHECK(std::abs(m2 - exact) < 4 * std::sqrt((m4 - m2 * m2) / n));
}
