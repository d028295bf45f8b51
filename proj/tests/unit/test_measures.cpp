#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "biharm/conformal.hpp"
#include "biharm/discrete.hpp"
#include "biharm/liouville.hpp"
#include "biharm/spectral_core.hpp"

using namespace biharm;

namespace {

SpectralField cos1(double a, int cutoff = 1) { return SpectralField::cosine_mode(FrequencyVector{{1, 0, 0, 0}}, cutoff, a); }

const Estimate& find(const MomentReport& r, const std::string& name) {
  for (const auto& e : r.estimates)
    if (e.name == name) return e;
  throw std::runtime_error("no estimate " + name);
}

}  // namespace

TEST_CASE("multiply and compose agree with pointwise evaluation") {
  SpectralField a = cos1(0.7, 2);
  a.set(FrequencyVector{{0, 1, -1, 0}}, {0.1, 0.2});
  const SpectralField b = SpectralField::cosine_mode(FrequencyVector{{0, 0, 1, 1}}, 1, 0.4);
  const SpectralField ab = multiply(a, b);
  const SpectralField ea = compose(a, [](double v) { return std::exp(v); }, 32, 12);
  for (const TorusPoint x : {TorusPoint(0.1, 0.2, 0.3, 0.4), TorusPoint(0.77, 0.05, 0.6, 0.9)}) {
    CHECK(ab.evaluate(x) == doctest::Approx(a.evaluate(x) * b.evaluate(x)).epsilon(1e-13));
    CHECK(ea.evaluate(x) == doctest::Approx(std::exp(a.evaluate(x))).epsilon(1e-10));
  }
}

TEST_CASE("flat conformal weight is the identity") {
  const ConformalWeight w(SpectralField(1, false));
  CHECK(w.volume() == doctest::Approx(1.0).epsilon(1e-14));
  const SpectralField u = SpectralField::cosine_mode(FrequencyVector{{1, 1, 0, 0}}, 2);
  const SpectralField v = SpectralField::cosine_mode(FrequencyVector{{1, 1, 0, 0}}, 2, 0.5);
  CHECK(conformal_kernel_pairing(w, u, v) == doctest::Approx(biharmonic_pairing(u, v)).epsilon(1e-12));
  const TorusPoint x(0.1, 0.2, 0.3, 0.4), y(0.3, 0.1, 0.9, 0.5);
  CHECK(conformal_shift_kernel(w, x, y) == doctest::Approx(biharmonic_kernel(x, y).value).epsilon(1e-12));
}

TEST_CASE("conformal volume is a Bessel value") {
  for (double a : {0.05, 0.1, 0.25}) {
    const ConformalWeight w(cos1(a));
    // int exp(4 a cos(2 pi x1)) dx = I_0(4a)
    CHECK(w.volume() == doctest::Approx(std::cyl_bessel_i(0.0, 4 * a)).epsilon(1e-12));
    CHECK(w.quadrature_error() < (a < 0.2 ? 1e-9 : 1e-6));
    const TorusPoint x(0.3, 0.5, 0.1, 0.2);
    const double err = std::abs(w.density_at(x) - std::exp(4 * w.phi_at(x)));
    INFO("a=", a, " err=", err, " estimate=", w.quadrature_error());
    CHECK(err <= w.quadrature_error() + 1e-13);
  }
}

TEST_CASE("shifted kernel is grounded for the new volume") {
  const ConformalWeight w(cos1(0.1));
  SpectralField one(0, false);
  one.set(FrequencyVector{}, 1.0);
  const SpectralField u = SpectralField::cosine_mode(FrequencyVector{{1, 0, 1, 0}}, 2);
  CHECK(std::abs(conformal_kernel_pairing(w, one, u)) < 1e-12);
  CHECK(std::abs(conformal_kernel_pairing(w, one, one)) < 1e-12);
  // symmetric
  const SpectralField v = cos1(1.0, 2);
  CHECK(conformal_kernel_pairing(w, u, v) == doctest::Approx(conformal_kernel_pairing(w, v, u)).epsilon(1e-13));
}

TEST_CASE("measure construction and integration") {
  GridField h(2);
  h.ground();
  const LiouvilleMeasure mu = semi_discrete_measure(h, 1.0);
  // zero field: every cell has mass 2^{-4l} exp(-gamma^2 k_l / 2)
  const double k = cube_covariance_lattice(2)[0];
  CHECK(mu.total() == doctest::Approx(std::exp(-0.5 * k)).epsilon(1e-13));
  CHECK(integrate(mu, [](const TorusPoint&) { return 1.0; }) == doctest::Approx(mu.total()).epsilon(1e-14));
  CHECK(representative_point(2, 0, Representative::midpoint)[0] == doctest::Approx(0.125));
  CHECK(representative_point(2, 0, Representative::anchor)[0] == 0.0);
  DiscreteField z(2);
  const LiouvilleMeasure nu = discrete_measure(z, 1.0);
  CHECK(nu.total() == doctest::Approx(std::exp(-0.5 * diagonal_variance(2))).epsilon(1e-13));
}

TEST_CASE("second moment quadrature: gamma = 0 and monotone in level") {
  const auto one = [](const TorusPoint&) { return 1.0; };
  const auto c = [](const TorusPoint& x) { return std::cos(kTwoPi * x[0]); };
  CHECK(second_moment_quadrature(3, 0.0, one) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(second_moment_quadrature(3, 0.0, c, Representative::midpoint)) < 1e-13);
  double prev = 0.0;
  const SecondMomentBound b = second_moment_bound(1.0);
  for (int l = 2; l <= 4; ++l) {
    const double q = second_moment_quadrature(l, 1.0, one);
    CHECK(q > prev);
    CHECK(q < b.bound);
    prev = q;
  }
}

TEST_CASE("mean mass is one") {
  for (double g : {0.5, 1.5}) {
    const MomentReport r = mass_moments(2, g, 2000, SeededStream(8));
    const Estimate& e = find(r, "mean_mass");
    CHECK(std::abs(e.value - 1.0) < 4 * e.std_error);
    const MomentReport d = discrete_mass_moments(2, g, 2000, SeededStream(9));
    const Estimate& f = find(d, "mean_mass");
    CHECK(std::abs(f.value - 1.0) < 4 * f.std_error);
  }
}

TEST_CASE("moment report serialises and flags the critical regime") {
  const MomentReport r = mass_moments(1, 3.0, 20, SeededStream(1));
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["gamma"] == 3.0);
  CHECK(j["estimates"].size() == 2);
  CHECK(!j["notes"].empty());
  CHECK_THROWS(negative_moment_estimate(2, 1.0, 1.0, 10, SeededStream(1)));
}

TEST_CASE("quasi-invariance estimators agree at low level") {
  const ConformalWeight w(cos1(0.1));
  SpectralField one(0, false);
  one.set(FrequencyVector{}, 1.0);
  const MomentReport r = quasi_invariance_check(2, 1.0, w, one, 3000, SeededStream(4), 1);
  const Estimate& d = find(r, "difference");
  CHECK(std::abs(d.value) < 4 * d.std_error);
  CHECK(find(r, "direct").value == doctest::Approx(w.volume()).epsilon(0.05));
}
