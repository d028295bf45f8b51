#pragma once

// Samplers and covariances of the biharmonic Gaussian field h on T^4 and of its
// approximations: the spectral (Fourier) field, the Haar-driven field
// h_hat_l = sqrt(8) pi G W_l with W_l the level-l projection of white noise,
// and exact cube averages h_l = pi_l h.

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "biharm/grid.hpp"
#include "biharm/rng.hpp"
#include "biharm/spectral_field.hpp"
#include "biharm/torus.hpp"

namespace biharm {

inline constexpr double kSqrt8Pi = 2.0 * std::numbers::sqrt2 * std::numbers::pi;

/// 1-D cube-average multiplier sinc(pi j h) for edge h; product over axes gives s_l(n).
double cube_multiplier(const FrequencyVector& n, int level);

// ---- spectral field ---------------------------------------------------------

/// Fourier coefficient c(n) of the full-resolution field attached to `stream`;
/// E|c(n)|^2 = 1 / (2 pi^2 |n|^4), c(-n) = conj(c(n)), c(0) = 0.
std::complex<double> spectral_coefficient(const SeededStream& stream, const FrequencyVector& n);

/// All modes |n|_inf <= N of the same field.
SpectralField sample_spectral_field(int cutoff, const SeededStream& stream);

/// <h, g> for the field attached to `stream`, touching only modes where g is nonzero.
double spectral_pairing(const SeededStream& stream, const SpectralField& g, double drop_below = 0.0);

/// Nonzero modes of g (|c| > drop_below, n != 0), for repeated pairings.
using ModeList = std::vector<std::pair<FrequencyVector, std::complex<double>>>;
ModeList nonzero_modes(const SpectralField& g, double drop_below = 0.0);
double spectral_pairing(const SeededStream& stream, const ModeList& g);

/// Exact cube averages of a trigonometric polynomial at level l.
GridField project_field(const SpectralField& u, int level);

// ---- Haar-driven field ------------------------------------------------------

class HaarFieldSample {
 public:
  HaarFieldSample(int level, const SeededStream& stream);

  int level() const { return level_; }
  std::uint64_t seed() const { return seed_; }
  /// xi indexed by HaarIndex::global(), levels < l.
  const std::vector<double>& xi() const { return xi_; }
  /// Cell values of W_l = sum xi eta (piecewise constant at level l).
  const GridField& white() const { return white_; }

  /// h_hat_l(x).
  double evaluate(const TorusPoint& x) const;
  /// Exact cube averages of h_hat_l at level L >= l.
  GridField cell_averages(int fine_level) const;

 private:
  int level_;
  std::uint64_t seed_;
  std::vector<double> xi_;
  GridField white_;
};

HaarFieldSample sample_haar_field(int level, const SeededStream& stream);
GridField project_field(const HaarFieldSample& h, int level);

// ---- covariances ------------------------------------------------------------

/// k_hat_l(x, y) = 8 pi^2 int G_l(x, z) G_l(y, z) dz.
double covariance_hat(int level, const TorusPoint& x, const TorusPoint& y);

/// k_l(x, y): double average of k over Q_l(x) x Q_l(y).
double cube_averaged_covariance(int level, const TorusPoint& x, const TorusPoint& y);

/// k_l on the lattice of cube offsets (row-major over 2^l per axis); entry 0 is the diagonal.
const std::vector<double>& cube_covariance_lattice(int level);

// ---- exact samplers of cube averages ---------------------------------------

/// Circulant sampler with the exact law of (h_l(Q))_Q.
class CubeAverageSampler {
 public:
  explicit CubeAverageSampler(int level);

  int level() const { return level_; }
  double diagonal() const { return diagonal_; }
  GridField sample(const SeededStream& stream) const;

 protected:
  GridField colour(const SeededStream& stream, const std::vector<double>& sqrt_spectrum) const;

  int level_;
  double diagonal_;
  std::vector<double> spectrum_;  // unnormalised DFT of the covariance row
  std::vector<double> sqrt_spectrum_;
};

/// Same law, with the Fourier modes |n|_inf <= K0 drawn explicitly (shared with
/// spectral_coefficient) so that pairings with smooth functions are available.
class HybridCubeSampler : public CubeAverageSampler {
 public:
  HybridCubeSampler(int level, int low_cutoff);

  struct Draw {
    GridField cells;
    SpectralField low;
  };
  int low_cutoff() const { return low_cutoff_; }
  Draw sample(const SeededStream& stream) const;

 private:
  int low_cutoff_;
  std::vector<double> sqrt_rest_;
};

// ---- negative Sobolev norm ---------------------------------------------------

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// ||G^eps h_hat_l||^2 = 8 pi^2 sum_n lambda^{-2-2 eps} |<W_l, e_n>|^2 for one sample.
double negative_sobolev_norm2(const HaarFieldSample& h, double eps);

/// Exact expectation 8 pi^2 sum_n |s_l(n)|^2 lambda^{-2-2 eps}.
double negative_sobolev_expectation(int level, double eps);

MonteCarloEstimate negative_sobolev_estimate(int level, double eps, std::size_t samples, const SeededStream& stream);

}  // namespace biharm
