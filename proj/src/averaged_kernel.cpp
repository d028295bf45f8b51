#include "biharm/averaged_kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "biharm/parallel.hpp"

namespace biharm {

namespace {

constexpr double kTauMax = 1.1;
constexpr int kPieces = 56;
constexpr int kImages = 4;
constexpr int kFourierTerms = 7;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Upper normal tail Q(x) = P(Z > x).
double normal_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// Phi(u) - Phi(v) for u >= v without cancellation.
double normal_mass(double u, double v) {
  if (v >= 0.0) return normal_tail(v) - normal_tail(u);
  if (u <= 0.0) return normal_tail(-u) - normal_tail(-v);
  return 1.0 - normal_tail(u) - normal_tail(-v);
}

// E[max(x + sigma Z, 0)] - max(x, 0)
double ramp_excess(double x, double sigma) {
  const double ax = std::abs(x);
  const double z = ax / sigma;
  return sigma * kInvSqrt2Pi * std::exp(-0.5 * z * z) - ax * normal_tail(z);
}

double trapezoid(double c, double a, double b) {
  const double ac = std::abs(c);
  const double inner = 0.5 * (a - b), outer = 0.5 * (a + b);
  if (ac <= inner) return 1.0 / a;
  if (ac >= outer) return 0.0;
  return (outer - ac) / (a * b);
}

// Windowed circle heat kernel at variance sigma^2, real-space form.
double real_space_profile(double d, double sigma, Window w) {
  double total = 0.0;
  for (int q = -kImages; q <= kImages; ++q) {
    const double c = d + q;
    if (w.a == 0.0) {
      const double z = c / sigma;
      total += kInvSqrt2Pi / sigma * std::exp(-0.5 * z * z);
    } else if (w.b == 0.0) {
      total += normal_mass((c + 0.5 * w.a) / sigma, (c - 0.5 * w.a) / sigma) / w.a;
    } else {
      const double outer = 0.5 * (w.a + w.b), inner = 0.5 * (w.a - w.b);
      double r = ramp_excess(c + outer, sigma) - ramp_excess(c + inner, sigma) - ramp_excess(c - inner, sigma) +
                 ramp_excess(c - outer, sigma);
      total += trapezoid(c, w.a, w.b) + r / (w.a * w.b);
    }
  }
  return total;
}

double fourier_profile_minus_one(double d, double tau, Window w) {
  double total = 0.0;
  for (int j = 1; j <= kFourierTerms; ++j) {
    const double m = sinc(kPi * j * w.a) * sinc(kPi * j * w.b);
    total += 2.0 * std::exp(-kFourPiSq * j * j * tau) * m * std::cos(kTwoPi * j * d);
  }
  return total;
}

double fold(double d) { return std::abs(wrap_centered(d)); }

}  // namespace

AveragedKernel::AveragedKernel(double s, Window w) : s_(s), w_(w) {
  if (!(s > 0.0)) throw std::invalid_argument("fractional order must be positive");
  if (w_.b > w_.a) std::swap(w_.a, w_.b);
  if (w_.b < 0.0 || w_.a > 1.0) throw std::invalid_argument("window widths must lie in [0, 1]");
  using rule = boost::math::quadrature::gauss<double, 30>;
  const auto& x = rule::abscissa();
  const auto& wt = rule::weights();
  const double gamma_s = boost::math::tgamma(s);
  for (int k = 0; k < kPieces; ++k) {
    const double hi = kTauMax * std::ldexp(1.0, -k);
    const double lo = 0.5 * hi;
    const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (int sign : {-1, 1}) {
        if (x[i] == 0.0 && sign > 0) continue;
        const double t = mid + sign * half * x[i];
        tau_.push_back(t);
        weight_.push_back(half * wt[i] * std::pow(t, s - 1.0) / gamma_s);
        fourier_.push_back(kFourPiSq * t >= 1.0 ? 1 : 0);
      }
    }
  }
  const double eps = kTauMax * std::ldexp(1.0, -kPieces);
  remainder_point_diag_ =
      s > 2.0 ? (std::pow(eps, s - 2.0) / ((s - 2.0) * 16.0 * kPi * kPi) - std::pow(eps, s) / s) / gamma_s : 0.0;
}

std::vector<double> AveragedKernel::axis_profile(double d) const {
  d = fold(d);
  std::vector<double> out(tau_.size());
  for (std::size_t i = 0; i < tau_.size(); ++i) {
    if (fourier_[i])
      out[i] = fourier_profile_minus_one(d, tau_[i], w_);
    else
      out[i] = real_space_profile(d, std::sqrt(2.0 * tau_[i]), w_);
  }
  return out;
}

double AveragedKernel::combine(const double* f0, const double* f1, const double* f2, const double* f3) const {
  double total = 0.0;
  for (std::size_t i = 0; i < tau_.size(); ++i) {
    double v;
    if (fourier_[i]) {
      // prod(1 + e_k) - 1 accumulated without forming the product
      double acc = f0[i];
      acc += f1[i] + acc * f1[i];
      acc += f2[i] + acc * f2[i];
      acc += f3[i] + acc * f3[i];
      v = acc;
    } else {
      v = f0[i] * f1[i] * f2[i] * f3[i] - 1.0;
    }
    total += weight_[i] * v;
  }
  return total;
}

double AveragedKernel::operator()(const Vec4& delta) const {
  const bool diag = fold(delta[0]) == 0.0 && fold(delta[1]) == 0.0 && fold(delta[2]) == 0.0 && fold(delta[3]) == 0.0;
  if (diag && w_.a == 0.0 && s_ <= 2.0) throw std::domain_error("point kernel of order <= 2 is singular on the diagonal");
  std::vector<double> f[4];
  for (int k = 0; k < kDim; ++k) f[k] = axis_profile(delta[k]);
  double v = combine(f[0].data(), f[1].data(), f[2].data(), f[3].data());
  if (diag && w_.a == 0.0) v += remainder_point_diag_;
  return v;
}

LatticeKernelTable::LatticeKernelTable(double s, Window w, int side, double shift) : side_(side) {
  if (side < 1) throw std::invalid_argument("lattice side must be positive");
  const AveragedKernel kernel(s, w);
  const std::size_t n = static_cast<std::size_t>(side);

  // distinct folded offsets along one axis
  std::vector<double> folded(n);
  std::vector<double> distinct;
  for (std::size_t i = 0; i < n; ++i) {
    folded[i] = fold(static_cast<double>(i) / side + shift);
    distinct.push_back(folded[i]);
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end(), [](double p, double q) { return std::abs(p - q) < 1e-14; }),
                 distinct.end());
  std::vector<std::size_t> id(n);
  for (std::size_t i = 0; i < n; ++i)
    id[i] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), folded[i] - 1e-14) - distinct.begin());

  const std::size_t nd = distinct.size();
  std::vector<std::vector<double>> prof(nd);
  parallel_for(0, nd, [&](std::size_t i) { prof[i] = kernel.axis_profile(distinct[i]); });

  // The kernel is symmetric under permutations of axes: evaluate sorted id tuples once.
  std::vector<std::array<std::size_t, 4>> tuples;
  for (std::size_t a = 0; a < nd; ++a)
    for (std::size_t b = a; b < nd; ++b)
      for (std::size_t c = b; c < nd; ++c)
        for (std::size_t d = c; d < nd; ++d) tuples.push_back({a, b, c, d});
  std::vector<double> tuple_value(tuples.size());
  const bool point = kernel.window().a == 0.0;
  parallel_for(0, tuples.size(), [&](std::size_t t) {
    const auto& q = tuples[t];
    const bool diag = point && distinct[q[0]] == 0.0 && distinct[q[3]] == 0.0;
    if (diag) {
      tuple_value[t] = kernel(Vec4{0.0, 0.0, 0.0, 0.0});
      return;
    }
    tuple_value[t] = kernel.combine(prof[q[0]].data(), prof[q[1]].data(), prof[q[2]].data(), prof[q[3]].data());
  });
  std::map<std::array<std::size_t, 4>, std::size_t> lookup;
  for (std::size_t t = 0; t < tuples.size(); ++t) lookup.emplace(tuples[t], t);

  values_.resize(n * n * n * n);
  parallel_for(0, n, [&](std::size_t i0) {
    for (std::size_t i1 = 0; i1 < n; ++i1)
      for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i3 = 0; i3 < n; ++i3) {
          std::array<std::size_t, 4> key{id[i0], id[i1], id[i2], id[i3]};
          std::sort(key.begin(), key.end());
          values_[((i0 * n + i1) * n + i2) * n + i3] = tuple_value[lookup.at(key)];
        }
  });
}

std::shared_ptr<const LatticeKernelTable> lattice_table(double s, Window w, int side, double shift) {
  using Key = std::tuple<double, double, double, int, double>;
  static std::mutex m;
  static std::map<Key, std::shared_ptr<const LatticeKernelTable>> cache;
  if (w.b > w.a) std::swap(w.a, w.b);
  const Key key{s, w.a, w.b, side, shift};
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto table = std::make_shared<const LatticeKernelTable>(s, w, side, shift);
  std::lock_guard<std::mutex> lock(m);
  return cache.emplace(key, table).first->second;
}

}  // namespace biharm
