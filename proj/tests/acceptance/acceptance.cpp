// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: biharm_acceptance [id ...]   (ids 1..12; default all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "biharm/conformal.hpp"
#include "biharm/discrete.hpp"
#include "biharm/fields.hpp"
#include "biharm/haar.hpp"
#include "biharm/liouville.hpp"
#include "biharm/spectral_core.hpp"

using namespace biharm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Estimate& find(const MomentReport& r, const std::string& name) {
  for (const auto& e : r.estimates)
    if (e.name == name) return e;
  throw std::runtime_error("missing estimate " + name);
}

double reference(const MomentReport& r, const std::string& name) {
  for (const auto& [k, v] : r.references)
    if (k == name) return v;
  throw std::runtime_error("missing reference " + name);
}

Vec4 direction(std::uint64_t seed) {
  const SeededStream s(seed);
  Vec4 e;
  double n = 0.0;
  for (int k = 0; k < 4; ++k) {
    e[k] = s.normal(StreamTag::replica, 0, static_cast<std::uint32_t>(k));
    n += e[k] * e[k];
  }
  for (double& v : e) v /= std::sqrt(n);
  return e;
}

TorusPoint along(const TorusPoint& x, const Vec4& e, double d) {
  Vec4 r = e;
  for (double& v : r) v *= d;
  return x.shifted(r);
}

double mean_sq_se(const std::vector<double>& p, double& se) {
  const double n = static_cast<double>(p.size());
  double m = 0.0;
  for (double v : p) m += v * v;
  m /= n;
  double var = 0.0;
  for (double v : p) var += (v * v - m) * (v * v - m);
  se = std::sqrt(var / (n - 1) / n);
  return m;
}

// 1 --------------------------------------------------------------------------
Outcome green_singularity() {
  const Vec4 e = direction(2024);
  const TorusPoint x(0.31, 0.62, 0.17, 0.84);
  double lo = 1e9, hi = -1e9;
  for (int j = 0; j < 20; ++j) {
    const double d = 1e-3 * std::pow(10.0, j / 19.0);
    const double r = green_kernel(x, along(x, e, d)).value * d * d * kFourPiSq;
    lo = std::min(lo, r), hi = std::max(hi, r);
  }
  return {lo >= 0.98 && hi <= 1.02, fmt("4pi^2 G d^2 in [%.6f, %.6f], need [0.98, 1.02]", lo, hi)};
}

// 2 --------------------------------------------------------------------------
Outcome log_kernel_law() {
  const Vec4 e = direction(2025);
  const TorusPoint x(0.05, 0.44, 0.93, 0.27);
  const int n = 40;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, sup = 0;
  for (int j = 0; j < n; ++j) {
    const double d = 1e-3 * std::pow(100.0, j / (n - 1.0));
    const double k = biharmonic_kernel(x, along(x, e, d)).value;
    const double t = -std::log(d);
    sx += t, sy += k, sxx += t * t, sxy += t * k;
    sup = std::max(sup, std::abs(k + std::log(d)));
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {std::abs(slope - 1.0) <= 0.02 && std::isfinite(sup), fmt("slope %.5f (need 1 +- 0.02), sup|k + log d| = %.4f", slope, sup)};
}

// 3 --------------------------------------------------------------------------
Outcome field_covariance() {
  std::vector<SpectralField> us;
  us.push_back(SpectralField::cosine_mode(FrequencyVector{{1, 0, 0, 0}}, 2));
  SpectralField b(2, true);
  b.set(FrequencyVector{{1, 1, 0, 0}}, {0.0, -0.5});
  b.set(FrequencyVector{{0, 0, 1, 0}}, 0.15);
  us.push_back(b);
  SpectralField c = SpectralField::cosine_mode(FrequencyVector{{0, 1, 0, 0}}, 2);
  c.set(FrequencyVector{{2, 0, 0, 0}}, 0.25);
  c.set(FrequencyVector{{1, -1, 2, 1}}, {0.1, 0.05});
  us.push_back(c);
  const std::size_t n = 10000;
  std::vector<std::vector<double>> p(us.size(), std::vector<double>(n));
  const SeededStream root(3);
  for (std::size_t s = 0; s < n; ++s) {
    const SpectralField h = sample_spectral_field(2, root.derive(s));
    for (std::size_t a = 0; a < us.size(); ++a) p[a][s] = h.inner(us[a]);
  }
  bool ok = true;
  std::string d;
  for (std::size_t a = 0; a < us.size(); ++a) {
    double se;
    const double m = mean_sq_se(p[a], se);
    const double exact = biharmonic_pairing(us[a], us[a]);
    const double z = (m - exact) / se;
    ok = ok && std::abs(z) <= 3.0;
    d += fmt("%su%zu z=%+.2f", a ? ", " : "", a + 1, z);
  }
  return {ok, d + " (need |z| <= 3)"};
}

// 4 --------------------------------------------------------------------------
Outcome martingale_exactness() {
  const int l = 3;
  double tower = 0.0, mart = 0.0;
  for (std::size_t s = 0; s < 100; ++s) {
    const SeededStream st = SeededStream(4).derive(s);
    const HaarFieldSample h(l, st);
    const GridField fine = h.cell_averages(l + 2);
    const GridField a = project_piecewise(project_piecewise(fine, l + 1), l);
    const GridField b = project_piecewise(fine, l);
    for (std::size_t i = 0; i < a.size(); ++i) tower = std::max(tower, std::abs(a[i] - b[i]));
    // the level-l white noise is the conditional expectation of the level-(l+1) one
    const HaarFieldSample h1(l + 1, st);
    const GridField w = project_piecewise(h1.white(), l);
    for (std::size_t i = 0; i < w.size(); ++i) mart = std::max(mart, std::abs(w[i] - h.white()[i]));
  }
  return {tower <= 1e-12 && mart <= 1e-12, fmt("max cell defect: tower %.2e, E[W_{l+1}|F_l] - W_l %.2e (need <= 1e-12)", tower, mart)};
}

// 5 --------------------------------------------------------------------------
Outcome green_three_way() {
  double dd = 0.0, dn = 0.0, tail = 0.0;
  for (int s = 0; s < 10; ++s) {
    const SeededStream st = SeededStream(5).derive(static_cast<std::uint64_t>(s));
    for (int l : {2, 4}) {
      DiscreteField u(l);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = st.normal(StreamTag::replica, i, static_cast<std::uint32_t>(l));
      u.ground();
      const DiscreteField a = discrete_green_apply(u, GreenMethod::dft);
      if (l == 2) {
        const DiscreteField b = discrete_green_apply(u, GreenMethod::dense);
        for (std::size_t i = 0; i < u.size(); ++i) dd = std::max(dd, std::abs(a[i] - b[i]));
      } else {
        const GreenResult r = discrete_green(u, GreenMethod::neumann);
        tail = std::max(tail, r.tail_bound);
        for (std::size_t i = 0; i < u.size(); ++i) dn = std::max(dn, std::abs(a[i] - r.value[i]));
      }
    }
  }
  return {dd <= 1e-10 && dn <= 1e-9, fmt("dft-dense (l=2) %.2e (need 1e-10); dft-neumann (l=4) %.2e (need 1e-9), tail bound %.1e", dd, dn, tail)};
}

// 6 --------------------------------------------------------------------------
Outcome spectral_gap_values() {
  const double g1 = spectral_gap(1), g6 = spectral_gap(6);
  const double rel = std::abs(g6 - kFourPiSq) / kFourPiSq;
  const bool exact = std::abs(g1 - 16.0) <= 4 * 16.0 * 2.220446049250313e-16;
  return {exact && rel <= 0.01, fmt("gap_1 = %.17g (need 16), gap_6 = %.6f vs 4pi^2 = %.6f, rel %.4f (need <= 0.01)", g1, g6, kFourPiSq, rel)};
}

// 7 --------------------------------------------------------------------------
Outcome k_dot_dual() {
  const double a = diagonal_variance(2);
  const ReturnSeries r = diagonal_variance_return_sum(2);
  const double d = std::abs(a - r.value);
  return {d <= 1e-8, fmt("green-square %.12f, return sum %.12f, diff %.2e (need 1e-8), %zu terms, tail <= %.1e", a, r.value, d, r.terms, r.tail_bound)};
}

// 8 --------------------------------------------------------------------------
Outcome mean_mass() {
  bool ok = true;
  std::string d;
  for (double g : {0.5, 1.0, 1.5, 2.5}) {
    const SeededStream st = SeededStream(8).derive(static_cast<std::uint64_t>(g * 10));
    const Estimate a = find(mass_moments(3, g, 2000, st.derive(0)), "mean_mass");
    const Estimate b = find(discrete_mass_moments(3, g, 2000, st.derive(1)), "mean_mass");
    const double za = (a.value - 1) / a.std_error, zb = (b.value - 1) / b.std_error;
    ok = ok && std::abs(za) <= 3 && std::abs(zb) <= 3;
    d += fmt("%sg=%.1f z=%+.2f/%+.2f", d.empty() ? "" : ", ", g, za, zb);
  }
  return {ok, d + " (semi/discrete, need |z| <= 3)"};
}

// 9 --------------------------------------------------------------------------
Outcome second_moment() {
  const MomentReport r = mass_moments(3, 1.0, 10000, SeededStream(9));
  const Estimate e = find(r, "second_moment");
  const double q3 = reference(r, "second_moment");
  const double z = (e.value - q3) / e.std_error;
  const auto one = [](const TorusPoint&) { return 1.0; };
  const double bound = second_moment_bound(1.0).bound;
  bool mono = true;
  double prev = 0.0;
  std::string qs;
  for (int l = 2; l <= 5; ++l) {
    const double q = second_moment_quadrature(l, 1.0, one);
    mono = mono && q >= prev && q <= bound;
    prev = q;
    qs += fmt("%s%.5f", l == 2 ? "" : " ", q);
  }
  return {std::abs(z) <= 3 && mono, fmt("MC %.5f +- %.5f vs quadrature %.5f (z=%+.2f); l=2..5: %s <= bound %.4f", e.value, e.std_error, q3, z, qs.c_str(), bound)};
}

// 10 -------------------------------------------------------------------------
Outcome negative_sobolev() {
  const double target = kEightPiSq * fractional_green_at_offset(3.0, Vec4{}).value;
  const MonteCarloEstimate e = negative_sobolev_estimate(5, 0.5, 600, SeededStream(10));
  const double rel = (e.mean - target) / target;
  return {std::abs(rel) <= 0.05, fmt("E||h_5||^2 = %.6f +- %.6f vs 8pi^2 G3(0,0) = %.6f, rel %+.4f (need |rel| <= 0.05)", e.mean, e.std_error, target, rel)};
}

// 11 -------------------------------------------------------------------------
Outcome conformal_covariance() {
  const ConformalWeight w(SpectralField::cosine_mode(FrequencyVector{{1, 0, 0, 0}}, 1, 0.1));
  const SpectralField u1 = SpectralField::cosine_mode(FrequencyVector{{1, 0, 0, 0}}, 2);
  SpectralField u2(2, true);
  u2.set(FrequencyVector{{1, 1, 0, 0}}, {0.0, -0.5});
  SpectralField u3 = SpectralField::cosine_mode(FrequencyVector{{0, 1, 0, 0}}, 2);
  u3.set(FrequencyVector{{2, 0, 0, 0}}, 0.25);
  const std::vector<SpectralField> us{u1, u2, u3};
  std::vector<WeightedTest> t;
  for (const auto& u : us) t.push_back(weighted_test(w, u));
  const std::pair<int, int> pairs[] = {{0, 0}, {1, 1}, {0, 2}};
  const std::size_t n = 10000;
  std::vector<std::array<double, 3>> p(n);
  for (std::size_t s = 0; s < n; ++s) {
    const SeededStream st = SeededStream(11).derive(s);
    const double xi = conformal_shift(st, w);
    for (int a = 0; a < 3; ++a) p[s][a] = conformal_pairing(st, xi, t[a]);
  }
  bool ok = true;
  std::string d;
  for (const auto& [a, b] : pairs) {
    double m = 0.0;
    for (const auto& v : p) m += v[a] * v[b];
    m /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& v : p) var += (v[a] * v[b] - m) * (v[a] * v[b] - m);
    const double se = std::sqrt(var / (n - 1.0) / n);
    const double z = (m - conformal_kernel_pairing(w, us[a], us[b])) / se;
    ok = ok && std::abs(z) <= 3;
    d += fmt("%s(u%d,u%d) z=%+.2f", d.empty() ? "" : ", ", a + 1, b + 1, z);
  }
  return {ok, d + " (need |z| <= 3)"};
}

// 12 -------------------------------------------------------------------------
Outcome quasi_invariance() {
  const ConformalWeight w(SpectralField::cosine_mode(FrequencyVector{{1, 0, 0, 0}}, 1, 0.1));
  SpectralField one(0, false);
  one.set(FrequencyVector{}, 1.0);
  const SpectralField c = SpectralField::cosine_mode(FrequencyVector{{1, 0, 0, 0}}, 1);
  bool ok = true;
  std::string d;
  int k = 0;
  for (const SpectralField* u : {static_cast<const SpectralField*>(&one), &c}) {
    const MomentReport r = quasi_invariance_check(3, 1.0, w, *u, 10000, SeededStream(12).derive(static_cast<std::uint64_t>(k)));
    const Estimate e = find(r, "difference");
    const double z = e.value / e.std_error;
    ok = ok && std::abs(z) <= 3;
    d += fmt("%su=%s: %.5f vs %.5f, z=%+.2f", k ? "; " : "", k ? "cos" : "1", find(r, "reweighted").value, find(r, "direct").value, z);
    ++k;
  }
  return {ok, d + " (need |z| <= 3)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"green kernel singularity", green_singularity},
      {"log-kernel law", log_kernel_law},
      {"field covariance", field_covariance},
      {"martingale exactness", martingale_exactness},
      {"discrete green three-way agreement", green_three_way},
      {"spectral gap", spectral_gap_values},
      {"k_dot dual formulas", k_dot_dual},
      {"liouville mean mass", mean_mass},
      {"second-moment identity", second_moment},
      {"H^-eps norm identity", negative_sobolev},
      {"conformal covariance", conformal_covariance},
      {"quasi-invariance first moment", quasi_invariance},
  };
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!pick.empty() && !pick.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(), sec);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
