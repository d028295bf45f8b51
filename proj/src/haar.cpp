#include "biharm/haar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "biharm/parallel.hpp"

namespace biharm {

namespace {

// In-place 16-point Walsh-Hadamard transform: out[beta] = sum_b (-1)^{popcount(beta & b)} in[b].
void hadamard16(double* v) {
  for (int h = 1; h < 16; h <<= 1)
    for (int i = 0; i < 16; i += 2 * h)
      for (int j = i; j < i + h; ++j) {
        const double a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
}

MultiIndex code_bits(int code) { return {(code >> 3) & 1, (code >> 2) & 1, (code >> 1) & 1, code & 1}; }

}  // namespace

TorusPoint DyadicCube::anchor() const {
  const double h = edge();
  return TorusPoint(alpha[0] * h, alpha[1] * h, alpha[2] * h, alpha[3] * h);
}

TorusPoint DyadicCube::center() const {
  const double h = edge();
  return TorusPoint((alpha[0] + 0.5) * h, (alpha[1] + 0.5) * h, (alpha[2] + 0.5) * h, (alpha[3] + 0.5) * h);
}

bool DyadicCube::contains(const TorusPoint& x) const { return cube_of(x, level).alpha == alpha; }

DyadicCube cube_of(const TorusPoint& x, int level) {
  DyadicCube q{level, {}};
  const double n = std::ldexp(1.0, level);
  for (int k = 0; k < kDim; ++k) {
    int a = static_cast<int>(std::floor(x[k] * n));
    q.alpha[k] = std::min(a, static_cast<int>(n) - 1);
  }
  return q;
}

std::uint64_t haar_count_below(int level) { return (std::uint64_t{1} << (4 * level)) - 1; }

std::uint64_t HaarIndex::global() const {
  const std::size_t n = level_side(level);
  return haar_count_below(level) + 15 * linear_index(alpha, n) + static_cast<std::uint64_t>(beta_code() - 1);
}

HaarIndex HaarIndex::from_global(std::uint64_t g) {
  int level = 0;
  while (haar_count_below(level + 1) <= g) ++level;
  const std::uint64_t local = g - haar_count_below(level);
  HaarIndex idx;
  idx.level = level;
  idx.alpha = multi_index(local / 15, level_side(level));
  const MultiIndex bits = code_bits(static_cast<int>(local % 15) + 1);
  for (int k = 0; k < kDim; ++k) idx.beta[k] = bits[k];
  return idx;
}

std::vector<HaarIndex> enumerate_indices(int level) {
  if (level < 0) throw std::invalid_argument("level must be nonnegative");
  const std::size_t count = level_size(level);
  std::vector<HaarIndex> out;
  out.reserve(15 * count);
  for (std::size_t a = 0; a < count; ++a)
    for (int code = 1; code < 16; ++code) {
      HaarIndex idx;
      idx.level = level;
      idx.alpha = multi_index(a, level_side(level));
      const MultiIndex bits = code_bits(code);
      for (int k = 0; k < kDim; ++k) idx.beta[k] = bits[k];
      out.push_back(idx);
    }
  return out;
}

double haar_eval(const HaarIndex& idx, const TorusPoint& x) {
  const DyadicCube fine = cube_of(x, idx.level + 1);
  int parity = 0;
  for (int k = 0; k < kDim; ++k) {
    if (fine.alpha[k] / 2 != idx.alpha[k]) return 0.0;
    parity += idx.beta[k] * (fine.alpha[k] & 1);
  }
  const double mag = std::ldexp(1.0, 2 * idx.level);
  return (parity & 1) ? -mag : mag;
}

double haar_inner(const HaarIndex& idx, const GridField& u) {
  const int L = u.level();
  if (L <= idx.level) throw std::invalid_argument("grid field must be finer than the Haar function");
  const int r = L - idx.level;  // cells per cube edge: 2^r
  const int m = 1 << r;
  const std::size_t n = u.side();
  double acc = 0.0;
  for (int c = 0; c < m * m * m * m; ++c) {
    const MultiIndex off = multi_index(static_cast<std::size_t>(c), static_cast<std::size_t>(m));
    MultiIndex cell;
    int parity = 0;
    for (int k = 0; k < kDim; ++k) {
      cell[k] = idx.alpha[k] * m + off[k];
      parity += idx.beta[k] * (off[k] >= m / 2 ? 1 : 0);
    }
    const double v = u[linear_index(cell, n)];
    acc += (parity & 1) ? -v : v;
  }
  return acc * std::ldexp(1.0, 2 * idx.level - 4 * L);
}

GridField project_piecewise(const GridField& u, int level) {
  if (level > u.level() || level < 0) throw std::invalid_argument("projection level must not exceed field level");
  const int r = u.level() - level;
  const std::size_t m = std::size_t{1} << r;
  const std::size_t n = level_side(level), nf = u.side();
  GridField out(level, u.grounded());
  const double scale = 1.0 / static_cast<double>(m * m * m * m);
  parallel_for(0, level_size(level), [&](std::size_t i) {
    const MultiIndex a = multi_index(i, n);
    double acc = 0.0;
    for (std::size_t c = 0; c < m * m * m * m; ++c) {
      const MultiIndex off = multi_index(c, m);
      MultiIndex cell;
      for (int k = 0; k < kDim; ++k) cell[k] = a[k] * static_cast<int>(m) + off[k];
      acc += u[linear_index(cell, nf)];
    }
    out[i] = acc * scale;
  });
  return out;
}

GridField project_function(const std::function<double(const TorusPoint&)>& f, int level, int sub) {
  if (sub < 1) throw std::invalid_argument("sub must be positive");
  const std::size_t n = level_side(level);
  const double h = 1.0 / static_cast<double>(n);
  GridField out(level);
  const std::size_t s = static_cast<std::size_t>(sub);
  parallel_for(0, level_size(level), [&](std::size_t i) {
    const MultiIndex a = multi_index(i, n);
    double acc = 0.0;
    for (std::size_t c = 0; c < s * s * s * s; ++c) {
      const MultiIndex off = multi_index(c, s);
      Vec4 x;
      for (int k = 0; k < kDim; ++k) x[k] = (a[k] + (off[k] + 0.5) / sub) * h;
      acc += f(TorusPoint(x));
    }
    out[i] = acc / static_cast<double>(s * s * s * s);
  });
  return out;
}

std::vector<double> haar_coefficients(const GridField& u) {
  const int L = u.level();
  std::vector<double> coeffs(haar_count_below(L), 0.0);
  std::vector<double> fine = u.values();
  for (int kappa = L - 1; kappa >= 0; --kappa) {
    const std::size_t n = level_side(kappa), nf = 2 * n;
    std::vector<double> coarse(level_size(kappa));
    const double scale = std::ldexp(1.0, -2 * kappa - 4);
    const std::uint64_t offset = haar_count_below(kappa);
    parallel_for(0, coarse.size(), [&](std::size_t i) {
      const MultiIndex a = multi_index(i, n);
      double v[16];
      for (int code = 0; code < 16; ++code) {
        const MultiIndex b = code_bits(code);
        MultiIndex cell;
        for (int k = 0; k < kDim; ++k) cell[k] = 2 * a[k] + b[k];
        v[code] = fine[linear_index(cell, nf)];
      }
      hadamard16(v);
      coarse[i] = v[0] / 16.0;
      for (int beta = 1; beta < 16; ++beta) coeffs[offset + 15 * i + beta - 1] = scale * v[beta];
    });
    fine.swap(coarse);
  }
  return coeffs;
}

GridField haar_reconstruct(const std::vector<double>& coeffs, int level) {
  if (coeffs.size() < haar_count_below(level)) throw std::invalid_argument("too few Haar coefficients");
  std::vector<double> coarse(1, 0.0);
  for (int kappa = 0; kappa < level; ++kappa) {
    const std::size_t n = level_side(kappa), nf = 2 * n;
    std::vector<double> fine(level_size(kappa + 1));
    const double mag = std::ldexp(1.0, 2 * kappa);
    const std::uint64_t offset = haar_count_below(kappa);
    parallel_for(0, coarse.size(), [&](std::size_t i) {
      const MultiIndex a = multi_index(i, n);
      double d[16];
      d[0] = coarse[i];
      for (int beta = 1; beta < 16; ++beta) d[beta] = mag * coeffs[offset + 15 * i + beta - 1];
      hadamard16(d);
      for (int code = 0; code < 16; ++code) {
        const MultiIndex b = code_bits(code);
        MultiIndex cell;
        for (int k = 0; k < kDim; ++k) cell[k] = 2 * a[k] + b[k];
        fine[linear_index(cell, nf)] = d[code];
      }
    });
    coarse.swap(fine);
  }
  return GridField(level, std::move(coarse), true);
}

}  // namespace biharm
