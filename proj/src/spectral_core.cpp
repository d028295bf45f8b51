#include "biharm/spectral_core.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <complex>
#include <vector>

namespace biharm {

namespace {

constexpr double kT0 = 1.0 / kTwoPi;
constexpr double kImageRadius = 5.0;
constexpr int kFourierRadius2 = 9;

struct IntVec {
  int v[4];
};

const std::vector<IntVec>& image_shifts() {
  static const std::vector<IntVec> shifts = [] {
    std::vector<IntVec> out;
    const int r = 6;
    for (int a = -r; a <= r; ++a)
      for (int b = -r; b <= r; ++b)
        for (int c = -r; c <= r; ++c)
          for (int d = -r; d <= r; ++d)
            if (a * a + b * b + c * c + d * d <= r * r) out.push_back({{a, b, c, d}});
    return out;
  }();
  return shifts;
}

const std::vector<IntVec>& fourier_modes() {
  static const std::vector<IntVec> modes = [] {
    std::vector<IntVec> out;
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b)
        for (int c = -3; c <= 3; ++c)
          for (int d = -3; d <= 3; ++d) {
            const int q = a * a + b * b + c * c + d * d;
            if (q > 0 && q <= kFourierRadius2) out.push_back({{a, b, c, d}});
          }
    return out;
  }();
  return modes;
}

// Gamma(b, z) for real b (possibly <= 0), z > 0.
double upper_gamma(double b, double z) {
  if (b > 0.0) return boost::math::tgamma(b, z);
  if (b == 0.0) return boost::math::expint(1, z);
  return (upper_gamma(b + 1.0, z) - std::pow(z, b) * std::exp(-z)) / b;
}

// (1/Gamma(s)) int_0^{t0} t^{s-1} (4 pi t)^{-2} exp(-a/t) dt with a = |r_m|^2 / 4.
double image_term(double s, double a, double gamma_s) {
  const double pref = 1.0 / (16.0 * kPi * kPi * gamma_s);
  if (a == 0.0) return pref * std::pow(kT0, s - 2.0) / (s - 2.0);
  return pref * std::pow(a, s - 2.0) * upper_gamma(2.0 - s, a / kT0);
}

}  // namespace

double grounded_heat_kernel(double t, const TorusPoint& x, const TorusPoint& y, int cutoff) {
  if (!(t > 0.0)) throw std::invalid_argument("heat kernel time must be positive");
  const Vec4 r = minimal_offset(x, y);
  double prod = 1.0;
  for (int k = 0; k < kDim; ++k) {
    double theta = 1.0;
    for (int j = 1; j <= cutoff; ++j) theta += 2.0 * std::exp(-kFourPiSq * j * j * t) * std::cos(kTwoPi * j * r[k]);
    prod *= theta;
  }
  return prod - 1.0;
}

KernelValue fractional_green_at_offset(double s, const Vec4& offset) {
  if (!(s > 0.0)) throw std::invalid_argument("fractional order must be positive");
  Vec4 r;
  for (int k = 0; k < kDim; ++k) r[k] = wrap_centered(offset[k]);
  const bool diagonal = norm2(r) == 0.0;
  if (diagonal && s <= 2.0) throw CoincidentPointsError();

  const double gamma_s = boost::math::tgamma(s);
  double real_space = 0.0;
  double magnitude = 0.0;
  for (const auto& m : image_shifts()) {
    Vec4 rm{r[0] + m.v[0], r[1] + m.v[1], r[2] + m.v[2], r[3] + m.v[3]};
    const double d2 = norm2(rm);
    if (d2 > kImageRadius * kImageRadius) continue;
    const double term = image_term(s, d2 / 4.0, gamma_s);
    real_space += term;
    magnitude += std::abs(term);
  }
  real_space -= std::pow(kT0, s) / boost::math::tgamma(s + 1.0);

  double spectral = 0.0;
  for (const auto& n : fourier_modes()) {
    const double lam = kFourPiSq * (n.v[0] * n.v[0] + n.v[1] * n.v[1] + n.v[2] * n.v[2] + n.v[3] * n.v[3]);
    const double phase = kTwoPi * (n.v[0] * r[0] + n.v[1] * r[1] + n.v[2] * r[2] + n.v[3] * r[3]);
    spectral += std::pow(lam, -s) * boost::math::gamma_q(s, lam * kT0) * std::cos(phase);
  }

  // Omitted images have |r_m| > 5, omitted modes |n|^2 >= 10; both tails are
  // bounded by a generous multiple of the first omitted shell.
  const double a_cut = kImageRadius * kImageRadius / 4.0;
  const double image_tail = 1e4 * std::abs(image_term(s, a_cut, gamma_s));
  const double lam_cut = kFourPiSq * (kFourierRadius2 + 1);
  const double fourier_tail = 1e4 * std::pow(lam_cut, -s) * boost::math::gamma_q(s, lam_cut * kT0);
  const double roundoff = 4e-16 * (magnitude + 1.0);
  return {real_space + spectral, image_tail + fourier_tail + roundoff};
}

KernelValue fractional_green_kernel(double s, const TorusPoint& x, const TorusPoint& y) {
  return fractional_green_at_offset(s, minimal_offset(x, y));
}

KernelValue green_kernel(const TorusPoint& x, const TorusPoint& y) { return fractional_green_kernel(1.0, x, y); }

KernelValue biharmonic_kernel(const TorusPoint& x, const TorusPoint& y) {
  KernelValue g = fractional_green_kernel(2.0, x, y);
  return {kEightPiSq * g.value, kEightPiSq * g.error_bound};
}

double biharmonic_weight(const FrequencyVector& n) {
  if (n.is_zero()) return 0.0;
  const double q = n.norm2();
  return 1.0 / (2.0 * kPi * kPi * q * q);
}

double paneitz_energy(const SpectralField& u) {
  double acc = 0.0;
  u.for_each_mode([&](const FrequencyVector& n, std::complex<double> c) {
    const double lam = n.laplace_eigenvalue();
    acc += lam * lam * std::norm(c);
  });
  return acc / kEightPiSq;
}

double sobolev_norm(const SpectralField& u, double s) {
  double acc = 0.0;
  u.for_each_mode([&](const FrequencyVector& n, std::complex<double> c) {
    if (n.is_zero()) {
      if (s == 0.0) acc += std::norm(c);
      return;
    }
    acc += std::pow(n.laplace_eigenvalue(), s) * std::norm(c);
  });
  return std::sqrt(acc);
}

double biharmonic_pairing(const SpectralField& u, const SpectralField& v) {
  double acc = 0.0;
  u.for_each_mode([&](const FrequencyVector& n, std::complex<double> c) {
    if (n.is_zero()) return;
    acc += biharmonic_weight(n) * (c * std::conj(v(n))).real();
  });
  return acc;
}

SpectralField apply_green_power(const SpectralField& u, double s) {
  SpectralField out(u.cutoff(), true);
  auto& dst = out.coefficients();
  u.for_each_mode([&](const FrequencyVector& n, std::complex<double> c) {
    if (n.is_zero()) return;
    dst[out.index_of(n)] = c * std::pow(n.laplace_eigenvalue(), -s);
  });
  return out;
}

KernelTable::KernelTable(KernelKind kind, int cutoff, double parameter)
    : kind_(kind), cutoff_(cutoff), parameter_(parameter) {
  if (cutoff < 1) throw std::invalid_argument("kernel cutoff must be >= 1");
  if ((kind == KernelKind::fractional || kind == KernelKind::heat) && !(parameter > 0.0))
    throw std::invalid_argument("kernel parameter must be positive");
}

double KernelTable::weight(const FrequencyVector& n) const {
  if (n.is_zero()) return 0.0;
  const double lam = n.laplace_eigenvalue();
  switch (kind_) {
    case KernelKind::green: return 1.0 / lam;
    case KernelKind::biharmonic: return kEightPiSq / (lam * lam);
    case KernelKind::fractional: return std::pow(lam, -parameter_);
    case KernelKind::heat: return std::exp(-lam * parameter_);
  }
  return 0.0;
}

double KernelTable::evaluate(const TorusPoint& x, const TorusPoint& y) const {
  const Vec4 r = minimal_offset(x, y);
  const int s = 2 * cutoff_ + 1;
  std::vector<std::complex<double>> ph(static_cast<std::size_t>(kDim * s));
  for (int k = 0; k < kDim; ++k)
    for (int j = 0; j < s; ++j) ph[k * s + j] = std::polar(1.0, kTwoPi * (j - cutoff_) * r[k]);
  // weight depends on |n|^2 only
  std::vector<double> wq(static_cast<std::size_t>(4 * cutoff_ * cutoff_ + 1));
  for (std::size_t q = 1; q < wq.size(); ++q) {
    const double lam = kFourPiSq * static_cast<double>(q);
    switch (kind_) {
      case KernelKind::green: wq[q] = 1.0 / lam; break;
      case KernelKind::biharmonic: wq[q] = kEightPiSq / (lam * lam); break;
      case KernelKind::fractional: wq[q] = std::pow(lam, -parameter_); break;
      case KernelKind::heat: wq[q] = std::exp(-lam * parameter_); break;
    }
  }
  double total = 0.0;
  for (int a = -cutoff_; a <= cutoff_; ++a)
    for (int b = -cutoff_; b <= cutoff_; ++b)
      for (int c = -cutoff_; c <= cutoff_; ++c) {
        const auto pabc = ph[a + cutoff_] * ph[s + b + cutoff_] * ph[2 * s + c + cutoff_];
        const int q3 = a * a + b * b + c * c;
        for (int d = -cutoff_; d <= cutoff_; ++d) {
          const int q = q3 + d * d;
          if (q == 0) continue;
          total += wq[static_cast<std::size_t>(q)] * (pabc * ph[3 * s + d + cutoff_]).real();
        }
      }
  return total;
}

}  // namespace biharm
