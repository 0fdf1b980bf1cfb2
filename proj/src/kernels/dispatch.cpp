#include <cmath>
#include <cstdlib>

#include "basis_common.hpp"

namespace pgpr::kernels {

void HalfAngles::push_back(double theta1, double theta2) {
  c1.push_back(std::cos(0.5 * theta1));
  s1.push_back(std::sin(0.5 * theta1));
  c2.push_back(std::cos(0.5 * theta2));
  s2.push_back(std::sin(0.5 * theta2));
}

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", scalar::mean, scalar::quad_form, scalar::accumulate_normal};
  return table;
}

const KernelTable* avx2_kernels() {
#if defined(PGPR_HAVE_AVX2_KERNELS)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{"avx2", avx2::mean, avx2::quad_form, avx2::accumulate_normal};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& chosen = [&]() -> const KernelTable& {
    const char* force = std::getenv("PGPR_FORCE_SCALAR");
    if (force != nullptr && *force != '\0') return scalar_kernels();
    const KernelTable* fast = avx2_kernels();
    return fast != nullptr ? *fast : scalar_kernels();
  }();
  return chosen;
}

}  // namespace pgpr::kernels
