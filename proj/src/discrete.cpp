#include "biharm/discrete.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "biharm/fft.hpp"
#include "biharm/fields.hpp"
#include "biharm/haar.hpp"
#include "biharm/parallel.hpp"
#include "biharm/simd/kernels.hpp"
#include "biharm/torus.hpp"

namespace biharm {

namespace {

constexpr double kGroundTol = 1e-10;

double scale_of(int level) { return std::ldexp(1.0, 2 * level + 3); }

void require_grounded(const DiscreteField& u) {
  double amax = 0.0;
  for (double v : u.values()) amax = std::max(amax, std::abs(v));
  if (std::abs(u.mean()) > kGroundTol * std::max(1.0, amax)) throw std::invalid_argument("input is not grounded (nonzero mean)");
}

double rms(const std::vector<double>& v) {
  return std::sqrt(simd::active().dot(v.data(), v.data(), v.size()) / static_cast<double>(v.size()));
}

// 1/lambda(m) table with 0 at m = 0.
std::vector<double> inverse_eigenvalues(int level) {
  const std::size_t n = level_side(level);
  std::vector<double> t(level_size(level));
  parallel_for(0, t.size(), [&](std::size_t i) { t[i] = i == 0 ? 0.0 : 1.0 / discrete_eigenvalue(level, multi_index(i, n)); });
  return t;
}

DiscreteField green_dft(const DiscreteField& u) {
  const int side = static_cast<int>(u.side());
  const Fft4& fft = fft_for_side(side);
  std::vector<cplx> z = fft.forward_real(u.values());
  const std::vector<double> inv = inverse_eigenvalues(u.level());
  const double norm = 1.0 / static_cast<double>(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] *= inv[i] * norm;
  return DiscreteField(u.level(), fft.inverse_real(std::move(z)), true);
}

// Lazy-walk form of the series: G = 2^{-2l-4} sum_k q^k, q = (I + p) / 2.
// p itself has eigenvalue -1 on the checkerboard mode, so sum p^k does not converge.
GreenResult green_neumann(const DiscreteField& u) {
  const int level = u.level();
  const int side = static_cast<int>(u.side());
  const double rho = 1.0 - spectral_gap(level) / (2.0 * scale_of(level));
  const double c = 1.0 / (2.0 * scale_of(level));
  const double stop = 1e-14 * std::max(rms(u.values()), 1e-300);
  const auto& K = simd::active();

  std::vector<double> term = u.values(), next(term.size()), acc(term.size(), 0.0);
  std::size_t k = 0;
  double r = rms(term);
  while (r >= stop) {
    K.axpy(1.0, term.data(), acc.data(), acc.size());
    K.stencil8(term.data(), next.data(), side, 0.5, 1.0 / 16.0);
    term.swap(next);
    r = rms(term);
    if (++k > 10'000'000) throw std::runtime_error("neumann series failed to converge");
  }
  for (double& v : acc) v *= c;
  GreenResult out{DiscreteField(level, std::move(acc), true), k, 0.0};
  out.value.ground();
  // ||sum_{j>=k} q^j u||_2 <= r / (1 - rho); sup <= sqrt(M) * rms
  out.tail_bound = c * std::sqrt(static_cast<double>(u.size())) * r / (1.0 - rho);
  return out;
}

DiscreteField green_dense(const DiscreteField& u) {
  if (u.level() > 2) throw std::invalid_argument("dense Green operator is limited to level <= 2");
  const int level = u.level();
  const std::size_t n = u.side(), M = u.size();
  const double s = scale_of(level);
  Eigen::MatrixXd A = Eigen::MatrixXd::Constant(M, M, 1.0 / static_cast<double>(M));
  for (std::size_t i = 0; i < M; ++i) {
    const MultiIndex a = multi_index(i, n);
    A(i, i) += s;
    for (int k = 0; k < kDim; ++k)
      for (int d : {-1, 1}) {
        MultiIndex b = a;
        b[k] = static_cast<int>((b[k] + d + static_cast<int>(n)) % static_cast<int>(n));
        A(i, linear_index(b, n)) -= s / 8.0;
      }
  }
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(u.values().data(), static_cast<Eigen::Index>(M));
  const Eigen::VectorXd x = A.ldlt().solve(rhs);
  DiscreteField out(level, std::vector<double>(x.data(), x.data() + M), true);
  out.ground();
  return out;
}

}  // namespace

double discrete_eigenvalue(int level, const MultiIndex& m) {
  const double n = static_cast<double>(level_side(level));
  double c = 0.0;
  for (int k = 0; k < kDim; ++k) c += std::cos(kTwoPi * m[k] / n);
  return scale_of(level) * (1.0 - 0.25 * c);
}

DiscreteField transition(const DiscreteField& u) {
  DiscreteField out(u.level(), u.grounded());
  simd::active().stencil8(u.values().data(), out.values().data(), static_cast<int>(u.side()), 0.0, 0.125);
  return out;
}

DiscreteField discrete_laplacian(const DiscreteField& u) {
  const double s = scale_of(u.level());
  DiscreteField out(u.level(), u.grounded());
  simd::active().stencil8(u.values().data(), out.values().data(), static_cast<int>(u.side()), s, -s / 8.0);
  return out;
}

double spectral_gap(int level) {
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  const int n = 1 << level;
  double best = INFINITY;
  for (int j = 1; j < n; ++j) best = std::min(best, discrete_eigenvalue(level, MultiIndex{j, 0, 0, 0}));
  return best;
}

GreenMethod parse_green_method(const std::string& name) {
  if (name == "dft") return GreenMethod::dft;
  if (name == "neumann") return GreenMethod::neumann;
  if (name == "dense") return GreenMethod::dense;
  throw std::invalid_argument("unknown Green method: " + name);
}

GreenResult discrete_green(const DiscreteField& u, GreenMethod method) {
  require_grounded(u);
  switch (method) {
    case GreenMethod::dft: return {green_dft(u), 0, 0.0};
    case GreenMethod::neumann: return green_neumann(u);
    case GreenMethod::dense: return {green_dense(u), 0, 0.0};
  }
  throw std::invalid_argument("bad Green method");
}

DiscreteField discrete_green_apply(const DiscreteField& u, GreenMethod method) { return discrete_green(u, method).value; }

DiscreteField sample_discrete_field(int level, const SeededStream& stream) {
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  DiscreteField xi(level);
  const double amp = std::ldexp(1.0, 2 * level);
  parallel_for(0, xi.size(), [&](std::size_t i) { xi[i] = amp * stream.normal(StreamTag::site, i, static_cast<std::uint32_t>(level)); });
  xi.ground();
  DiscreteField h = green_dft(xi);
  for (double& v : h.values()) v *= kSqrt8Pi;
  return h;
}

DiscreteField sample_discrete_field_haar(int level, const SeededStream& stream) {
  const HaarFieldSample w(level, stream);
  DiscreteField xi(level, w.white().values());
  xi.ground();
  DiscreteField h = green_dft(xi);
  for (double& v : h.values()) v *= kSqrt8Pi;
  return h;
}

double diagonal_variance(int level) {
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  const std::vector<double> inv = inverse_eigenvalues(level);
  return kEightPiSq * simd::active().dot(inv.data(), inv.data(), inv.size());
}

double diagonal_variance_kernel_sum(int level, std::size_t site) {
  DiscreteField delta(level);
  const double M = static_cast<double>(delta.size());
  if (site >= delta.size()) throw std::out_of_range("site index");
  // G(., i) under the normalised measure: G u(j) = 2^{-4l} sum_i G(j, i) u(i)
  for (double& v : delta.values()) v = -1.0;
  delta[site] += M;
  const DiscreteField col = green_dft(delta);
  return kEightPiSq * simd::active().dot(col.values().data(), col.values().data(), col.size()) / M;
}

ReturnSeries diagonal_variance_return_sum(int level, double tol) {
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  const int side = 1 << level;
  const std::size_t M = level_size(level);
  const double inv_m = 1.0 / static_cast<double>(M);
  const double rho = 1.0 - spectral_gap(level) / (2.0 * scale_of(level));
  std::vector<double> v(M, 0.0), next(M);
  v[0] = 1.0;
  ReturnSeries out;
  double acc = 0.0;
  for (std::size_t k = 0;; ++k) {
    acc += static_cast<double>(k + 1) * (v[0] - inv_m);
    // sum_{j>k} (j+1) rho^j, times the bound |q^j(i,i) - 1/M| <= (1 - 1/M) rho^j
    const double rk = std::pow(rho, static_cast<double>(k + 1));
    const double tail = (1.0 - inv_m) * rk * ((k + 2) - (k + 1) * rho) / ((1.0 - rho) * (1.0 - rho));
    if (tail * kPi * kPi / 32.0 < tol * std::abs(acc) * kPi * kPi / 32.0 || k > 50'000'000) {
      out.terms = k + 1;
      out.tail_bound = tail * kPi * kPi / 32.0;
      break;
    }
    simd::active().stencil8(v.data(), next.data(), side, 0.5, 1.0 / 16.0);
    v.swap(next);
  }
  out.value = kPi * kPi / 32.0 * acc;
  return out;
}

GridField extend_piecewise(const DiscreteField& u) { return GridField(u.level(), u.values(), u.grounded()); }

DiscreteField restrict_to_sites(const GridField& u) { return DiscreteField(u.level(), u.values(), u.grounded()); }

double gibbs_log_density(const DiscreteField& zeta) {
  require_grounded(zeta);
  const DiscreteField d = discrete_laplacian(zeta);
  const double norm2 = simd::active().dot(d.values().data(), d.values().data(), d.size()) / static_cast<double>(d.size());
  return -norm2 / (16.0 * kPi * kPi);
}

}  // namespace biharm
