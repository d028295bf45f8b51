#include "biharm/liouville.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "biharm/fft.hpp"
#include "biharm/haar.hpp"
#include "biharm/parallel.hpp"
#include "biharm/simd/kernels.hpp"
#include "biharm/spectral_core.hpp"

namespace biharm {

namespace {

std::vector<double> masses_from(const std::vector<double>& h, int level, double gamma, double variance) {
  std::vector<double> m(h.size());
  simd::active().exp_affine(h.data(), m.data(), h.size(), gamma, -0.5 * gamma * gamma * variance, std::ldexp(1.0, -4 * level));
  return m;
}

std::vector<double> sample_points(int level, const TestFunction& u, Representative rep) {
  std::vector<double> v(level_size(level));
  parallel_for(0, v.size(), [&](std::size_t i) { v[i] = u(representative_point(level, i, rep)); });
  return v;
}

double weighted_total(const std::vector<double>& masses, const std::vector<double>& weights) {
  return simd::active().dot(masses.data(), weights.data(), masses.size());
}

void gate_notes(MomentReport& r) {
  if (std::abs(r.gamma) >= kCriticalGamma) r.notes.push_back("outside |gamma|<sqrt(8) convergence regime: construction only");
  else if (std::abs(r.gamma) >= kL2Gamma) r.notes.push_back("|gamma|>=2: second moments diverge as l grows");
}

}  // namespace

const char* to_string(MeasureKind k) { return k == MeasureKind::semi_discrete ? "semi_discrete" : "discrete"; }

double LiouvilleMeasure::total() const { return simd::active().sum(masses.data(), masses.size()); }

LiouvilleMeasure semi_discrete_measure(const GridField& cells, double gamma, std::uint64_t seed) {
  const int level = cells.level();
  const double var = cube_covariance_lattice(level)[0];
  return {MeasureKind::semi_discrete, level, gamma, seed, masses_from(cells.values(), level, gamma, var)};
}

LiouvilleMeasure discrete_measure(const DiscreteField& h, double gamma, std::uint64_t seed) {
  const int level = h.level();
  return {MeasureKind::discrete, level, gamma, seed, masses_from(h.values(), level, gamma, diagonal_variance(level))};
}

TorusPoint representative_point(int level, std::size_t cell, Representative rep) {
  const DyadicCube q{level, multi_index(cell, level_side(level))};
  return rep == Representative::anchor ? q.anchor() : q.center();
}

double integrate(const LiouvilleMeasure& mu, const TestFunction& u, Representative rep) {
  return weighted_total(mu.masses, sample_points(mu.level, u, rep));
}

double second_moment_quadrature(int level, double gamma, const TestFunction& u, Representative rep) {
  const int side = 1 << level;
  const Fft4& fft = fft_for_side(side);
  std::vector<double> kern = cube_covariance_lattice(level);
  for (double& v : kern) v = std::exp(gamma * gamma * v);
  const std::vector<cplx> kh = fft.forward_real(kern);
  const std::vector<cplx> uh = fft.forward_real(sample_points(level, u, rep));
  double acc = 0.0;
  for (std::size_t i = 0; i < uh.size(); ++i) acc += std::norm(uh[i]) * kh[i].real();
  const double M = static_cast<double>(uh.size());
  return acc / (M * M * M);
}

SecondMomentBound second_moment_bound(double gamma) {
  const double g2 = gamma * gamma;
  if (!(g2 < 4.0)) throw std::invalid_argument("second-moment bound needs |gamma| < 2");
  SecondMomentBound b;
  // C: sup of k + log d over probe pairs at 24 log-spaced separations along 16 directions
  const SeededStream probe(0x5eed);
  double c = -INFINITY;
  for (int dir = 0; dir < 16; ++dir) {
    Vec4 e;
    double nrm = 0.0;
    for (int k = 0; k < kDim; ++k) {
      e[k] = probe.normal(StreamTag::replica, static_cast<std::uint64_t>(dir), static_cast<std::uint32_t>(k));
      nrm += e[k] * e[k];
    }
    for (double& v : e) v /= std::sqrt(nrm);
    for (int j = 0; j < 24; ++j) {
      const double d = 1e-3 * std::pow(500.0, j / 23.0);
      const TorusPoint y(d * e[0], d * e[1], d * e[2], d * e[3]);
      const double dist = torus_distance(TorusPoint(0, 0, 0, 0), y);
      c = std::max(c, biharmonic_kernel(TorusPoint(0, 0, 0, 0), y).value + std::log(dist));
    }
  }
  b.log_constant = c;
  // int over the ball r < 1/2 analytically, the rest of the cell on a midpoint grid
  const double ball = 2.0 * kPi * kPi * std::pow(0.5, 4.0 - g2) / (4.0 - g2);
  const int n = 32;
  double rest = 0.0;
  for (int a = 0; a < n; ++a)
    for (int bb = 0; bb < n; ++bb)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          const double x0 = (a + 0.5) / n - 0.5, x1 = (bb + 0.5) / n - 0.5, x2 = (cc + 0.5) / n - 0.5, x3 = (d + 0.5) / n - 0.5;
          const double r2 = x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3;
          if (r2 >= 0.25) rest += std::pow(r2, -0.5 * g2);
        }
  b.integral = ball + rest / std::pow(n, 4);
  b.bound = std::exp(g2 * c) * b.integral;
  return b;
}

Estimate summarize(const std::string& name, const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("need at least two samples");
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {name, mean, std::sqrt(ss / (n - 1.0) / n)};
}

std::string MomentReport::to_json() const {
  nlohmann::ordered_json j;
  j["stage"] = stage;
  j["gamma"] = gamma;
  j["level"] = level;
  j["samples"] = samples;
  nlohmann::ordered_json est = nlohmann::ordered_json::array();
  for (const auto& e : estimates) est.push_back({{"name", e.name}, {"value", e.value}, {"std_error", e.std_error}});
  j["estimates"] = est;
  nlohmann::ordered_json ref = nlohmann::ordered_json::object();
  for (const auto& [k, v] : references) ref[k] = v;
  j["references"] = ref;
  j["notes"] = notes;
  return j.dump();
}

MomentReport mass_moments(int level, double gamma, std::size_t samples, const SeededStream& stream) {
  const CubeAverageSampler sampler(level);
  std::vector<double> y(samples), y2(samples);
  parallel_for(0, samples, [&](std::size_t i) {
    const GridField h = sampler.sample(stream.derive(i));
    y[i] = semi_discrete_measure(h, gamma).total();
    y2[i] = y[i] * y[i];
  });
  MomentReport r{"liouville.mass", gamma, level, samples, {summarize("mean_mass", y), summarize("second_moment", y2)}, {}, {}};
  r.references.emplace_back("mean_mass", 1.0);
  r.references.emplace_back("second_moment", second_moment_quadrature(level, gamma, [](const TorusPoint&) { return 1.0; }));
  gate_notes(r);
  return r;
}

MomentReport discrete_mass_moments(int level, double gamma, std::size_t samples, const SeededStream& stream) {
  std::vector<double> y(samples);
  parallel_for(0, samples, [&](std::size_t i) { y[i] = discrete_measure(sample_discrete_field(level, stream.derive(i)), gamma).total(); });
  MomentReport r{"liouville.discrete_mass", gamma, level, samples, {summarize("mean_mass", y)}, {}, {}};
  r.references.emplace_back("mean_mass", 1.0);
  r.references.emplace_back("k_dot", diagonal_variance(level));
  gate_notes(r);
  return r;
}

MomentReport negative_moment_estimate(int level, double gamma, double p, std::size_t samples, const SeededStream& stream) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  if (samples < 100) throw std::invalid_argument("negative moments need at least 100 samples");
  const CubeAverageSampler sampler(level);
  std::vector<double> v(samples);
  parallel_for(0, samples, [&](std::size_t i) {
    v[i] = std::pow(semi_discrete_measure(sampler.sample(stream.derive(i)), gamma).total(), -p);
  });
  MomentReport r{"liouville.negative_moment", gamma, level, samples, {summarize("negative_moment", v)}, {}, {}};
  r.references.emplace_back("p", p);
  r.notes.push_back("diagnostic only");
  gate_notes(r);
  return r;
}

MomentReport martingale_increments(int level, double gamma, const TestFunction& u, std::size_t samples, const SeededStream& stream) {
  const CubeAverageSampler sampler(level + 1);
  const std::vector<double> uf = sample_points(level + 1, u, Representative::midpoint);
  const std::vector<double> uc = sample_points(level, u, Representative::midpoint);
  std::vector<double> inc(samples);
  parallel_for(0, samples, [&](std::size_t i) {
    const GridField fine = sampler.sample(stream.derive(i));
    const GridField coarse = project_piecewise(fine, level);
    inc[i] = weighted_total(semi_discrete_measure(fine, gamma).masses, uf) - weighted_total(semi_discrete_measure(coarse, gamma).masses, uc);
  });
  MomentReport r{"liouville.martingale", gamma, level, samples, {summarize("increment", inc)}, {}, {}};
  r.references.emplace_back("increment", 0.0);
  gate_notes(r);
  return r;
}

double conformal_mass_factor(double xi, const ConformalWeight& w, double gamma, const TorusPoint& x) {
  return std::exp(-gamma * xi + 0.5 * gamma * gamma * w.phi_bar_at(x) + 4.0 * w.phi_at(x));
}

double conformal_mass_factor(const SeededStream& h, const ConformalWeight& w, double gamma, const TorusPoint& x) {
  return conformal_mass_factor(conformal_shift(h, w), w, gamma, x);
}

MomentReport quasi_invariance_check(int level, double gamma, const ConformalWeight& w, const SpectralField& u,
                                    std::size_t samples, const SeededStream& stream, int low_cutoff) {
  const HybridCubeSampler sampler(level, low_cutoff);
  const std::size_t M = level_size(level);
  const double cell = std::ldexp(1.0, -4 * level);
  const double kdiag = sampler.diagonal();

  // Per-cell weights, both exact cube averages of smooth factors (mu_l has a
  // piecewise-constant density, so integrating a smooth factor against it is a cube average).
  //   reweighted: avg_Q(u e^{4 phi + gamma^2 phi_bar / 2})
  //   direct:     avg_Q(u e^{4 phi}) e^{gamma^2 avg_Q(phi_bar) / 2}
  const int cutoff = std::max(w.phi().cutoff(), w.phi_bar().cutoff());
  SpectralField psi(cutoff, false);
  const double g2 = gamma * gamma;
  psi.for_each_mode([&](const FrequencyVector& n, std::complex<double>& c) {
    if (w.phi().contains(n)) c += 4.0 * w.phi()(n);
    if (w.phi_bar().contains(n)) c += 0.5 * g2 * w.phi_bar()(n);
  });
  const int grid = 4 * (cutoff + 1);
  const SpectralField factor = compose(psi, [](double v) { return std::exp(v); }, grid, grid / 2 - 1);
  const GridField rew = project_field(multiply(u, factor), level);
  const GridField uf = project_field(w.weighted(u), level);
  const GridField pb = project_field(w.phi_bar(), level);
  std::vector<double> reweight(M), direct_weight(M);
  for (std::size_t i = 0; i < M; ++i) {
    reweight[i] = rew[i];
    direct_weight[i] = cell * uf[i] * std::exp(0.5 * g2 * pb[i]);
  }

  const SeededStream left = stream.derive(0), right = stream.derive(1);
  std::vector<double> a(samples), b(samples);
  parallel_for(0, samples, [&](std::size_t s) {
    {
      const auto d = sampler.sample(left.derive(s));
      const double xi = d.low.inner(w.density()) / w.volume();
      a[s] = weighted_total(masses_from(d.cells.values(), level, gamma, kdiag), reweight) * std::exp(-gamma * xi);
    }
    {
      const auto d = sampler.sample(right.derive(s));
      const double xi = d.low.inner(w.density()) / w.volume();
      // exp(gamma (h - xi) - gamma^2 (k_l - avg phi_bar) / 2) * vol_{g'}(Q) * u
      std::vector<double> e(M);
      simd::active().exp_affine(d.cells.values().data(), e.data(), M, gamma, -gamma * xi - 0.5 * g2 * kdiag, 1.0);
      b[s] = weighted_total(e, direct_weight);
    }
  });
  MomentReport r{"liouville.quasi_invariance", gamma, level, samples, {summarize("reweighted", a), summarize("direct", b)}, {}, {}};
  std::vector<double> diff(samples);
  for (std::size_t s = 0; s < samples; ++s) diff[s] = a[s] - b[s];
  r.estimates.push_back(summarize("difference", diff));
  r.references.emplace_back("difference", 0.0);
  r.references.emplace_back("volume", w.volume());
  r.notes.push_back("first moment only; xi truncated to |n|_inf <= " + std::to_string(low_cutoff));
  gate_notes(r);
  return r;
}

}  // namespace biharm
