#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "biharm/averaged_kernel.hpp"
#include "biharm/fft.hpp"
#include "biharm/fields.hpp"
#include "biharm/haar.hpp"
#include "biharm/parallel.hpp"
#include "biharm/simd/kernels.hpp"
#include "biharm/spectral_core.hpp"

namespace biharm {

namespace {

// Cube-averaged Green kernel A_l(delta) = average of G over a level-l cube at offset delta.
const AveragedKernel& cube_green(int level) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<AveragedKernel>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[level];
  if (!slot) {
    const double h = std::ldexp(1.0, -level);
    slot = std::make_unique<AveragedKernel>(1.0, Window{h, 0.0});
  }
  return *slot;
}

// A_l(x - c_alpha) for every cube alpha of level l.
std::vector<double> cube_green_row(int level, const TorusPoint& x) {
  const AveragedKernel& A = cube_green(level);
  const std::size_t n = level_side(level);
  const double h = 1.0 / static_cast<double>(n);
  std::vector<std::vector<double>> prof(kDim * n);
  for (int k = 0; k < kDim; ++k)
    for (std::size_t a = 0; a < n; ++a) prof[k * n + a] = A.axis_profile(x[k] - (static_cast<double>(a) + 0.5) * h);
  std::vector<double> row(level_size(level));
  parallel_for(0, row.size(), [&](std::size_t i) {
    const MultiIndex a = multi_index(i, n);
    row[i] = A.combine(prof[a[0]].data(), prof[n + a[1]].data(), prof[2 * n + a[2]].data(), prof[3 * n + a[3]].data());
  });
  return row;
}

// Real unnormalised DFT of a real, reflection-symmetric lattice table.
std::vector<double> symmetric_spectrum(const std::vector<double>& table, int side) {
  std::vector<cplx> z = fft_for_side(side).forward_real(table);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

}  // namespace

HaarFieldSample::HaarFieldSample(int level, const SeededStream& stream)
    : level_(level), seed_(stream.seed()), xi_(haar_count_below(level)) {
  if (level < 1) throw std::invalid_argument("Haar field level must be >= 1");
  parallel_for(0, xi_.size(), [&](std::size_t g) { xi_[g] = stream.normal(StreamTag::haar, g); });
  white_ = haar_reconstruct(xi_, level);
}

double HaarFieldSample::evaluate(const TorusPoint& x) const {
  const std::vector<double> row = cube_green_row(level_, x);
  return kSqrt8Pi * std::ldexp(1.0, -4 * level_) * simd::active().dot(row.data(), white_.values().data(), row.size());
}

GridField HaarFieldSample::cell_averages(int fine_level) const {
  if (fine_level < level_) throw std::invalid_argument("cell averages need a level >= the field level");
  const int side = 1 << fine_level;
  const std::size_t ns = static_cast<std::size_t>(side);
  const double h = std::ldexp(1.0, -level_), hf = std::ldexp(1.0, -fine_level);
  auto table = lattice_table(1.0, Window{h, hf}, side, 0.5 * (hf - h));

  const std::size_t n = level_side(level_);
  const int up = 1 << (fine_level - level_);
  std::vector<cplx> w(level_size(fine_level), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < white_.size(); ++i) {
    MultiIndex a = multi_index(i, n);
    for (int& v : a) v *= up;
    w[linear_index(a, ns)] = white_[i];
  }
  const Fft4& fft = fft_for_side(side);
  fft.forward(w);
  std::vector<cplx> t = fft.forward_real(table->values());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] *= t[i];
  std::vector<double> v = fft.inverse_real(std::move(w));
  const double scale = kSqrt8Pi * std::ldexp(1.0, -4 * level_) / static_cast<double>(v.size());
  for (double& x : v) x *= scale;
  return GridField(fine_level, std::move(v), true);
}

HaarFieldSample sample_haar_field(int level, const SeededStream& stream) { return HaarFieldSample(level, stream); }

GridField project_field(const HaarFieldSample& h, int level) {
  if (level >= h.level()) return h.cell_averages(level);
  return project_piecewise(h.cell_averages(h.level()), level);
}

double covariance_hat(int level, const TorusPoint& x, const TorusPoint& y) {
  const std::vector<double> ax = cube_green_row(level, x);
  const std::vector<double> ay = x == y ? ax : cube_green_row(level, y);
  return kEightPiSq * std::ldexp(1.0, -4 * level) * simd::active().dot(ax.data(), ay.data(), ax.size());
}

const std::vector<double>& cube_covariance_lattice(int level) {
  static std::mutex m;
  static std::map<int, std::vector<double>> cache;
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(level);
    if (it != cache.end()) return it->second;
  }
  const double h = std::ldexp(1.0, -level);
  std::vector<double> v = lattice_table(2.0, Window{h, h}, 1 << level)->values();
  for (double& x : v) x *= kEightPiSq;
  std::lock_guard<std::mutex> lock(m);
  return cache.emplace(level, std::move(v)).first->second;
}

double cube_averaged_covariance(int level, const TorusPoint& x, const TorusPoint& y) {
  const DyadicCube qx = cube_of(x, level), qy = cube_of(y, level);
  const int n = 1 << level;
  MultiIndex d;
  for (int k = 0; k < kDim; ++k) d[k] = ((qx.alpha[k] - qy.alpha[k]) % n + n) % n;
  return cube_covariance_lattice(level)[linear_index(d, static_cast<std::size_t>(n))];
}

// ---- exact cube-average samplers ---------------------------------------------

CubeAverageSampler::CubeAverageSampler(int level) : level_(level) {
  if (level < 1) throw std::invalid_argument("sampler level must be >= 1");
  const auto& row = cube_covariance_lattice(level);
  diagonal_ = row[0];
  spectrum_ = symmetric_spectrum(row, 1 << level);
  spectrum_[0] = 0.0;  // k_l is grounded; the row sum is quadrature noise
  sqrt_spectrum_.resize(spectrum_.size());
  for (std::size_t i = 0; i < spectrum_.size(); ++i) sqrt_spectrum_[i] = std::sqrt(std::max(spectrum_[i], 0.0));
}

GridField CubeAverageSampler::colour(const SeededStream& stream, const std::vector<double>& sqrt_spectrum) const {
  const int side = 1 << level_;
  const std::size_t size = level_size(level_);
  std::vector<cplx> z(size);
  for (std::size_t i = 0; i < size; ++i) z[i] = stream.normal(StreamTag::lattice, i, static_cast<std::uint32_t>(level_));
  const Fft4& fft = fft_for_side(side);
  fft.forward(z);
  for (std::size_t i = 0; i < size; ++i) z[i] *= sqrt_spectrum[i];
  std::vector<double> v = fft.inverse_real(std::move(z));
  const double scale = 1.0 / static_cast<double>(size);
  for (double& x : v) x *= scale;
  return GridField(level_, std::move(v), true);
}

GridField CubeAverageSampler::sample(const SeededStream& stream) const { return colour(stream, sqrt_spectrum_); }

HybridCubeSampler::HybridCubeSampler(int level, int low_cutoff) : CubeAverageSampler(level), low_cutoff_(low_cutoff) {
  const int side = 1 << level;
  if (low_cutoff < 1 || 2 * low_cutoff >= side) throw std::invalid_argument("low cutoff must satisfy 1 <= 2 K0 < 2^l");
  const std::size_t ns = static_cast<std::size_t>(side);
  std::vector<double> rest = spectrum_;
  const double size = static_cast<double>(rest.size());
  SpectralField probe(low_cutoff, true);
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const FrequencyVector n = probe.frequency_at(i);
    if (n.is_zero()) continue;
    MultiIndex m;
    for (int k = 0; k < kDim; ++k) m[k] = ((n[k] % side) + side) % side;
    const double s = cube_multiplier(n, level);
    rest[linear_index(m, ns)] -= size * biharmonic_weight(n) * s * s;
  }
  sqrt_rest_.resize(rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i) sqrt_rest_[i] = std::sqrt(std::max(rest[i], 0.0));
}

HybridCubeSampler::Draw HybridCubeSampler::sample(const SeededStream& stream) const {
  Draw d{colour(stream, sqrt_rest_), sample_spectral_field(low_cutoff_, stream)};
  const GridField low = project_field(d.low, level_);
  simd::active().axpy(1.0, low.values().data(), d.cells.values().data(), low.size());
  return d;
}

// ---- negative Sobolev norm ----------------------------------------------------

namespace {

const std::vector<double>& sobolev_weights(int level, double eps) {
  static std::mutex m;
  static std::map<std::pair<int, double>, std::vector<double>> cache;
  const auto key = std::make_pair(level, eps);
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double h = std::ldexp(1.0, -level);
  auto table = lattice_table(2.0 + 2.0 * eps, Window{h, h}, 1 << level);
  std::vector<double> omega = symmetric_spectrum(table->values(), 1 << level);
  const double size = static_cast<double>(omega.size());
  for (double& w : omega) w /= size;
  std::lock_guard<std::mutex> lock(m);
  return cache.emplace(key, std::move(omega)).first->second;
}

}  // namespace

double negative_sobolev_norm2(const HaarFieldSample& h, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const std::vector<double>& omega = sobolev_weights(h.level(), eps);
  std::vector<cplx> d = fft_for_side(1 << h.level()).forward_real(h.white().values());
  const double size = static_cast<double>(d.size());
  const double s = simd::active().weighted_abs2(omega.data(), reinterpret_cast<const double*>(d.data()), d.size());
  return kEightPiSq * s / (size * size);
}

double negative_sobolev_expectation(int level, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double h = std::ldexp(1.0, -level);
  return kEightPiSq * lattice_table(2.0 + 2.0 * eps, Window{h, h}, 1 << level)->at(0);
}

MonteCarloEstimate negative_sobolev_estimate(int level, double eps, std::size_t samples, const SeededStream& stream) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  sobolev_weights(level, eps);
  std::vector<double> v(samples);
  parallel_for(0, samples, [&](std::size_t i) { v[i] = negative_sobolev_norm2(HaarFieldSample(level, stream.derive(i)), eps); });
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(samples);
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

}  // namespace biharm
