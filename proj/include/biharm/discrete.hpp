#pragma once

// The discrete torus T^4_l = (2^{-l} Z^4) / Z^4 with the normalised counting
// measure 2^{-4l} sum_i. Sites are identified with level-l cubes via i = 2^{-l} alpha.
//
//   -Delta_l u = 2^{2l+3} (u - p_l u),  p_l = average over the 8 axis neighbours
//   lambda(m)  = 2^{2l+3} (1 - 1/4 sum_k cos(2 pi m_k 2^{-l}))

#include <string>
#include <vector>

#include "biharm/grid.hpp"
#include "biharm/rng.hpp"

namespace biharm {

double discrete_eigenvalue(int level, const MultiIndex& m);

/// -Delta_l u (not grounded-checked; constants map to 0).
DiscreteField discrete_laplacian(const DiscreteField& u);

/// p_l u
DiscreteField transition(const DiscreteField& u);

/// min over m != 0 of lambda(m).
double spectral_gap(int level);

enum class GreenMethod { dft, neumann, dense };

GreenMethod parse_green_method(const std::string& name);

struct GreenResult {
  DiscreteField value;
  std::size_t iterations = 0;  // neumann only
  double tail_bound = 0.0;     // sup-norm bound on the discarded series tail (neumann only)
};

/// Grounded solution of -Delta_l v = u. Throws std::invalid_argument for a
/// non-grounded input, or for method dense above level 2.
GreenResult discrete_green(const DiscreteField& u, GreenMethod method = GreenMethod::dft);

/// Convenience: discrete_green(u, method).value
DiscreteField discrete_green_apply(const DiscreteField& u, GreenMethod method = GreenMethod::dft);

/// h_dot_l = sqrt(8) pi G_l xi_dot, with xi_dot = 2^{2l} (xi - mean xi) the grounded
/// site white noise under the normalised measure.
DiscreteField sample_discrete_field(int level, const SeededStream& stream);

/// Same law, driven by the level-l Haar white noise W_l (cell values of sum xi eta).
DiscreteField sample_discrete_field_haar(int level, const SeededStream& stream);

/// k_dot_l = E[h_dot_l(i)^2] = 8 pi^2 sum_{m != 0} lambda(m)^{-2}.
double diagonal_variance(int level);

/// 8 pi^2 2^{-4l} sum_j G_l(i, j)^2 at site i, from the Green kernel column.
double diagonal_variance_kernel_sum(int level, std::size_t site);

struct ReturnSeries {
  double value = 0.0;
  std::size_t terms = 0;
  double tail_bound = 0.0;
};

/// The same quantity as a weighted sum of return probabilities of the lazy walk
/// q = (I + p_l) / 2:  (pi^2 / 32) sum_k (k + 1) (q^k(i,i) - 2^{-4l}).
ReturnSeries diagonal_variance_return_sum(int level, double tol = 1e-15);

GridField extend_piecewise(const DiscreteField& u);
DiscreteField restrict_to_sites(const GridField& u);

/// -(1 / 16 pi^2) ||Delta_l zeta||^2 (normalised measure), without -log Z_l.
double gibbs_log_density(const DiscreteField& zeta);

}  // namespace biharm
