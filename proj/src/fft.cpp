#include "biharm/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace biharm {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft4::Fft4(int side) : side_(side), size_(static_cast<std::size_t>(side) * side * side * side) {
  if (side < 1) throw std::invalid_argument("fft side must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_complex* buf = fftw_alloc_complex(size_);
  const int n[4] = {side, side, side, side};
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fwd_ = fftw_plan_dft(4, n, buf, buf, FFTW_FORWARD, flags);
  inv_ = fftw_plan_dft(4, n, buf, buf, FFTW_BACKWARD, flags);
  fftw_free(buf);
  if (fwd_ == nullptr || inv_ == nullptr) throw std::runtime_error("fftw planning failed");
}

Fft4::~Fft4() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void Fft4::forward(std::vector<cplx>& data) const {
  if (data.size() != size_) throw std::invalid_argument("fft size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void Fft4::inverse(std::vector<cplx>& data) const {
  if (data.size() != size_) throw std::invalid_argument("fft size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(inv_), p, p);
}

std::vector<cplx> Fft4::forward_real(const std::vector<double>& x) const {
  std::vector<cplx> z(x.begin(), x.end());
  forward(z);
  return z;
}

std::vector<double> Fft4::inverse_real(std::vector<cplx> spectrum) const {
  inverse(spectrum);
  std::vector<double> out(spectrum.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = spectrum[i].real();
  return out;
}

const Fft4& fft_for_side(int side) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<Fft4>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[side];
  if (!slot) slot = std::make_unique<Fft4>(side);
  return *slot;
}

}  // namespace biharm
