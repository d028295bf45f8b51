#include <cmath>
#include <stdexcept>

#include "biharm/fft.hpp"
#include "biharm/fields.hpp"
#include "biharm/spectral_core.hpp"

namespace biharm {

namespace {

bool upper_half(const FrequencyVector& n) {
  for (int k = 0; k < kDim; ++k) {
    if (n[k] > 0) return true;
    if (n[k] < 0) return false;
  }
  return false;
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace

double cube_multiplier(const FrequencyVector& n, int level) {
  const double h = std::ldexp(1.0, -level);
  double s = 1.0;
  for (int k = 0; k < kDim; ++k) s *= sinc(kPi * n[k] * h);
  return s;
}

std::complex<double> spectral_coefficient(const SeededStream& stream, const FrequencyVector& n) {
  if (n.is_zero()) return {0.0, 0.0};
  const bool up = upper_half(n);
  const FrequencyVector rep = up ? n : -n;
  const double sd = std::sqrt(0.5 * biharmonic_weight(rep));
  const std::uint64_t key = rep.key();
  const std::complex<double> c{sd * stream.normal(StreamTag::spectral, key, 0), sd * stream.normal(StreamTag::spectral, key, 1)};
  return up ? c : std::conj(c);
}

SpectralField sample_spectral_field(int cutoff, const SeededStream& stream) {
  if (cutoff < 1) throw std::invalid_argument("spectral cutoff must be >= 1");
  SpectralField u(cutoff, true);
  auto& c = u.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const FrequencyVector n = u.frequency_at(i);
    if (upper_half(n)) {
      const auto v = spectral_coefficient(stream, n);
      c[i] = v;
      c[u.index_of(-n)] = std::conj(v);
    }
  }
  return u;
}

ModeList nonzero_modes(const SpectralField& g, double drop_below) {
  ModeList out;
  const auto& c = g.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) <= drop_below) continue;
    const FrequencyVector n = g.frequency_at(i);
    if (!n.is_zero()) out.emplace_back(n, c[i]);
  }
  return out;
}

double spectral_pairing(const SeededStream& stream, const ModeList& g) {
  double acc = 0.0;
  for (const auto& [n, c] : g) acc += (spectral_coefficient(stream, n) * std::conj(c)).real();
  return acc;
}

double spectral_pairing(const SeededStream& stream, const SpectralField& g, double drop_below) {
  return spectral_pairing(stream, nonzero_modes(g, drop_below));
}

GridField project_field(const SpectralField& u, int level) {
  const int side = 1 << level;
  const double h = 1.0 / side;
  const std::size_t ns = static_cast<std::size_t>(side);
  std::vector<cplx> b(level_size(level), cplx{0.0, 0.0});
  const auto& c = u.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == cplx{0.0, 0.0}) continue;
    const FrequencyVector n = u.frequency_at(i);
    MultiIndex m;
    int total = 0;
    for (int k = 0; k < kDim; ++k) {
      m[k] = ((n[k] % side) + side) % side;
      total += n[k];
    }
    // cube average of e_n over Q_gamma: s(n) e_n(centre) = s(n) e^{i pi h sum n} e^{2 pi i n.gamma h}
    b[linear_index(m, ns)] += c[i] * cube_multiplier(n, level) * std::polar(1.0, kPi * h * total);
  }
  GridField out(level, fft_for_side(side).inverse_real(std::move(b)), u.grounded());
  return out;
}

}  // namespace biharm
