#include "biharm/spectral_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace biharm {

SpectralField::SpectralField(int cutoff, bool grounded) : cutoff_(cutoff), grounded_(grounded) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be nonnegative");
  const std::size_t s = static_cast<std::size_t>(side());
  coeffs_.assign(s * s * s * s, {0.0, 0.0});
}

std::size_t SpectralField::index_of(const FrequencyVector& n) const {
  const std::size_t s = static_cast<std::size_t>(side());
  std::size_t idx = 0;
  for (int k = 0; k < kDim; ++k) idx = idx * s + static_cast<std::size_t>(n[k] + cutoff_);
  return idx;
}

FrequencyVector SpectralField::frequency_at(std::size_t idx) const {
  const std::size_t s = static_cast<std::size_t>(side());
  FrequencyVector n;
  for (int k = kDim - 1; k >= 0; --k) {
    n.n[k] = static_cast<int>(idx % s) - cutoff_;
    idx /= s;
  }
  return n;
}

std::complex<double> SpectralField::operator()(const FrequencyVector& n) const {
  if (!contains(n)) return {0.0, 0.0};
  return coeffs_[index_of(n)];
}

void SpectralField::set(const FrequencyVector& n, std::complex<double> value) {
  if (!contains(n)) throw std::out_of_range("frequency beyond cutoff");
  if (n.is_zero()) {
    if (grounded_ && value != std::complex<double>{0.0, 0.0}) throw std::invalid_argument("grounded field has c(0) = 0");
    coeffs_[index_of(n)] = {value.real(), 0.0};
    return;
  }
  coeffs_[index_of(n)] = value;
  coeffs_[index_of(-n)] = std::conj(value);
}

double SpectralField::evaluate(const TorusPoint& x) const {
  const int s = side();
  std::vector<std::complex<double>> ph(static_cast<std::size_t>(kDim * s));
  for (int k = 0; k < kDim; ++k)
    for (int j = 0; j < s; ++j) ph[k * s + j] = std::polar(1.0, kTwoPi * (j - cutoff_) * x[k]);
  std::complex<double> total{0.0, 0.0};
  std::size_t idx = 0;
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) {
      const auto pab = ph[a] * ph[s + b];
      for (int c = 0; c < s; ++c) {
        const auto pabc = pab * ph[2 * s + c];
        std::complex<double> row{0.0, 0.0};
        for (int d = 0; d < s; ++d) row += coeffs_[idx++] * ph[3 * s + d];
        total += pabc * row;
      }
    }
  return total.real();
}

double SpectralField::inner(const SpectralField& other) const {
  double acc = 0.0;
  const int n = std::min(cutoff_, other.cutoff_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    FrequencyVector f = frequency_at(i);
    if (f.sup_norm() > n) continue;
    acc += (coeffs_[i] * std::conj(other(f))).real();
  }
  return acc;
}

double SpectralField::max_hermitian_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const FrequencyVector f = frequency_at(i);
    worst = std::max(worst, std::abs(coeffs_[i] - std::conj(coeffs_[index_of(-f)])));
  }
  return worst;
}

void SpectralField::for_each_mode(const std::function<void(const FrequencyVector&, std::complex<double>&)>& fn) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) fn(frequency_at(i), coeffs_[i]);
}

void SpectralField::for_each_mode(const std::function<void(const FrequencyVector&, std::complex<double>)>& fn) const {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) fn(frequency_at(i), coeffs_[i]);
}

SpectralField SpectralField::cosine_mode(const FrequencyVector& n, int cutoff, double amplitude) {
  SpectralField u(cutoff, !n.is_zero());
  if (n.is_zero())
    u.set(n, amplitude);
  else
    u.set(n, 0.5 * amplitude);
  return u;
}

}  // namespace biharm
