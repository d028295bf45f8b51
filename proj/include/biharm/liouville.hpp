#pragma once

// Semi-discrete and discrete quantum Liouville measures on T^4.
//
//   mu_l(Q)      = 2^{-4l} exp(gamma h_l(Q) - gamma^2 k_l(0) / 2)
//   mu_dot_l(i)  = 2^{-4l} exp(gamma h_dot_l(i) - gamma^2 k_dot_l / 2)

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "biharm/conformal.hpp"
#include "biharm/discrete.hpp"
#include "biharm/fields.hpp"
#include "biharm/grid.hpp"

namespace biharm {

inline constexpr double kCriticalGamma = 2.8284271247461903;  // sqrt(8)
inline constexpr double kL2Gamma = 2.0;

enum class MeasureKind { semi_discrete, discrete };
enum class Representative { anchor, midpoint };

const char* to_string(MeasureKind k);

struct LiouvilleMeasure {
  MeasureKind kind = MeasureKind::semi_discrete;
  int level = 0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> masses;  // row-major over cubes / sites

  double total() const;
};

/// Masses from exact cube averages h_l (e.g. CubeAverageSampler output or a projection of it).
LiouvilleMeasure semi_discrete_measure(const GridField& cells, double gamma, std::uint64_t seed = 0);

LiouvilleMeasure discrete_measure(const DiscreteField& h, double gamma, std::uint64_t seed = 0);

using TestFunction = std::function<double(const TorusPoint&)>;

TorusPoint representative_point(int level, std::size_t cell, Representative rep);

/// sum over cells of mass * u(representative).
double integrate(const LiouvilleMeasure& mu, const TestFunction& u, Representative rep = Representative::anchor);

/// iint exp(gamma^2 k_l(x, y)) u(x) u(y) by cell pairs (= E[<u, mu_l>^2]).
double second_moment_quadrature(int level, double gamma, const TestFunction& u, Representative rep = Representative::anchor);

struct SecondMomentBound {
  double log_constant = 0.0;  // sup of k + log d over the probe pairs
  double integral = 0.0;      // int d(x, 0)^{-gamma^2} dx
  double bound = 0.0;         // exp(gamma^2 C) * integral
};

/// Jensen-type bound exp(gamma^2 C) int d^{-gamma^2} for u = 1, gamma < 2.
SecondMomentBound second_moment_bound(double gamma);

struct Estimate {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
};

struct MomentReport {
  std::string stage;
  double gamma = 0.0;
  int level = 0;
  std::size_t samples = 0;
  std::vector<Estimate> estimates;
  std::vector<std::pair<std::string, double>> references;
  std::vector<std::string> notes;

  /// One-line JSON object.
  std::string to_json() const;
};

/// mean and standard error of a sample.
Estimate summarize(const std::string& name, const std::vector<double>& v);

/// Semi-discrete total-mass statistics at level l: E[Y], E[Y^2] with the quadrature reference.
MomentReport mass_moments(int level, double gamma, std::size_t samples, const SeededStream& stream);

/// Discrete total-mass statistics at level l.
MomentReport discrete_mass_moments(int level, double gamma, std::size_t samples, const SeededStream& stream);

/// E[mu_l(T^4)^{-p}] by Monte Carlo.
MomentReport negative_moment_estimate(int level, double gamma, double p, std::size_t samples, const SeededStream& stream);

/// Increments <u, mu_{l+1}> - <u, mu_l> under shared randomness (nested projections of one level-(l+1) draw).
MomentReport martingale_increments(int level, double gamma, const TestFunction& u, std::size_t samples, const SeededStream& stream);

/// exp(-gamma xi + gamma^2 phi_bar(x) / 2 + 4 phi(x)).
double conformal_mass_factor(double xi, const ConformalWeight& w, double gamma, const TorusPoint& x);
double conformal_mass_factor(const SeededStream& h, const ConformalWeight& w, double gamma, const TorusPoint& x);

/// Two estimators of E int u dmu'_l on (T^4, g'):
///   "reweighted": int u * conformal_mass_factor dmu_l
///   "direct":     cube masses vol_{g'}(Q) exp(gamma (h_l - xi) - gamma^2 (k_l - avg_Q phi_bar) / 2)
/// using independent replicas and the hybrid sampler (explicit modes |n|_inf <= low_cutoff).
MomentReport quasi_invariance_check(int level, double gamma, const ConformalWeight& w, const SpectralField& u,
                                    std::size_t samples, const SeededStream& stream, int low_cutoff = 3);

}  // namespace biharm
