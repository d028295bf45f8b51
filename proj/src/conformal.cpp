#include "biharm/conformal.hpp"

#include <cmath>
#include <stdexcept>

#include "biharm/fft.hpp"
#include "biharm/fields.hpp"
#include "biharm/grid.hpp"
#include "biharm/spectral_core.hpp"

namespace biharm {

namespace {

std::size_t folded_index(const FrequencyVector& n, int side) {
  MultiIndex m;
  for (int k = 0; k < kDim; ++k) m[k] = ((n[k] % side) + side) % side;
  return linear_index(m, static_cast<std::size_t>(side));
}

// Values at the points j / side.
std::vector<double> to_grid(const SpectralField& u, int side) {
  const std::size_t ns = static_cast<std::size_t>(side);
  std::vector<cplx> b(ns * ns * ns * ns, cplx{0.0, 0.0});
  const auto& c = u.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != cplx{0.0, 0.0}) b[folded_index(u.frequency_at(i), side)] += c[i];
  return fft_for_side(side).inverse_real(std::move(b));
}

SpectralField from_grid(const std::vector<double>& values, int side, int cutoff, bool grounded) {
  if (2 * cutoff >= side) throw std::invalid_argument("grid too coarse for the requested cutoff");
  const std::vector<cplx> z = fft_for_side(side).forward_real(values);
  const double norm = 1.0 / static_cast<double>(z.size());
  SpectralField out(cutoff, grounded);
  auto& c = out.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const FrequencyVector n = out.frequency_at(i);
    if (grounded && n.is_zero()) continue;
    c[i] = z[folded_index(n, side)] * norm;
  }
  return out;
}

// sum_{n != 0} w(n) a(n) conj(b(n)) over the common modes.
double weighted_pairing(const SpectralField& a, const SpectralField& b) {
  double acc = 0.0;
  a.for_each_mode([&](const FrequencyVector& n, std::complex<double> c) {
    if (n.is_zero() || !b.contains(n) || c == cplx{0.0, 0.0}) return;
    acc += biharmonic_weight(n) * (c * std::conj(b(n))).real();
  });
  return acc;
}

// FFT round-off below this is not paired with the field.
constexpr double kDropBelow = 1e-14;

double mean_of(const SpectralField& u) { return u.grounded() ? 0.0 : u(FrequencyVector{}).real(); }

}  // namespace

SpectralField multiply(const SpectralField& a, const SpectralField& b) {
  const int cutoff = a.cutoff() + b.cutoff();
  const int side = 2 * cutoff + 2;
  std::vector<double> x = to_grid(a, side);
  const std::vector<double> y = to_grid(b, side);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= y[i];
  return from_grid(x, side, cutoff, false);
}

SpectralField compose(const SpectralField& u, const std::function<double(double)>& fn, int side, int cutoff) {
  std::vector<double> x = to_grid(u, side);
  for (double& v : x) v = fn(v);
  return from_grid(x, side, cutoff, false);
}

ConformalWeight::ConformalWeight(SpectralField phi, int grid_side) : phi_(std::move(phi)) {
  if (grid_side < 4) throw std::invalid_argument("grid side must be >= 4");
  if (2 * phi_.cutoff() >= grid_side) throw std::invalid_argument("conformal factor not resolved by the quadrature grid");
  const int cutoff = grid_side / 2 - 1;
  const auto e4 = [](double p) { return std::exp(4.0 * p); };
  f_ = compose(phi_, e4, grid_side, cutoff);
  // sup-norm estimate: aliasing on kept modes plus the dropped tail, both read off the doubled grid
  const SpectralField fine = compose(phi_, e4, 2 * grid_side, grid_side - 1);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const FrequencyVector n = fine.frequency_at(i);
    const cplx c = fine.coefficients()[i];
    quad_error_ += n.sup_norm() <= cutoff ? std::abs(f_(n) - c) : std::abs(c);
  }

  f_modes_ = nonzero_modes(f_, kDropBelow);
  volume_ = f_(FrequencyVector{}).real();
  if (!(volume_ > 0.0)) throw std::invalid_argument("conformal volume must be positive");

  phi_bar_ = SpectralField(cutoff, false);
  auto& pb = phi_bar_.coefficients();
  double kk = 0.0;
  for (std::size_t i = 0; i < pb.size(); ++i) {
    const FrequencyVector n = phi_bar_.frequency_at(i);
    if (n.is_zero()) continue;
    const double wn = biharmonic_weight(n);
    const cplx fn = f_.coefficients()[i];
    pb[i] = 2.0 / volume_ * wn * fn;
    kk += wn * std::norm(fn);
  }
  pb[phi_bar_.index_of(FrequencyVector{})] = -kk / (volume_ * volume_);
}

double conformal_shift_kernel(const ConformalWeight& w, const TorusPoint& x, const TorusPoint& y) {
  return biharmonic_kernel(x, y).value - 0.5 * w.phi_bar_at(x) - 0.5 * w.phi_bar_at(y);
}

double conformal_kernel_pairing(const ConformalWeight& w, const SpectralField& u, const SpectralField& v) {
  const SpectralField uf = w.weighted(u), vf = w.weighted(v);
  const double iu = mean_of(uf), iv = mean_of(vf);
  return weighted_pairing(uf, vf) - 0.5 * w.phi_bar().inner(uf) * iv - 0.5 * iu * w.phi_bar().inner(vf);
}

double conformal_shift(const SpectralField& h, const ConformalWeight& w) { return h.inner(w.density()) / w.volume(); }

double conformal_shift(const SeededStream& stream, const ConformalWeight& w) {
  return spectral_pairing(stream, w.density_modes()) / w.volume();
}

SpectralField conformal_shift_field(const SpectralField& h, const ConformalWeight& w) {
  SpectralField out(h.cutoff(), false);
  out.coefficients() = h.coefficients();
  const double xi = conformal_shift(h, w);
  out.set(FrequencyVector{}, out(FrequencyVector{}) - xi);
  return out;
}

WeightedTest weighted_test(const ConformalWeight& w, const SpectralField& u) {
  const SpectralField uf = w.weighted(u);
  return {nonzero_modes(uf, kDropBelow), mean_of(uf)};
}

double conformal_pairing(const SeededStream& stream, double xi, const WeightedTest& u) {
  return spectral_pairing(stream, u.modes) - xi * u.mass;
}

double conformal_pairing(const SeededStream& stream, const ConformalWeight& w, const SpectralField& u) {
  return conformal_pairing(stream, conformal_shift(stream, w), weighted_test(w, u));
}

}  // namespace biharm
