#include <cstdlib>
#include <string_view>

#include "biharm/simd/kernels.hpp"

namespace biharm::simd {

const Kernels* avx2_compiled();

const Kernels* avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_compiled() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& active() {
  static const Kernels& chosen = [] () -> const Kernels& {
    const char* env = std::getenv("BIHARM_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar();
    if (const Kernels* v = avx2()) return *v;
    return scalar();
  }();
  return chosen;
}

}  // namespace biharm::simd
