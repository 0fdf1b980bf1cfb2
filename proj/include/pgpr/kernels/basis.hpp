#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

// Batched evaluation of the 25-function trigonometric basis. Points are given
// as structure-of-arrays half-angle cosines and sines; the basis vector of a
// point is never stored, it is rebuilt from its two 5-term power rows.

namespace pgpr::kernels {

struct HalfAngleBatch {
  const double* c1;
  const double* s1;
  const double* c2;
  const double* s2;
  std::size_t count;
};

/// Owning storage for a HalfAngleBatch.
struct HalfAngles {
  std::vector<double> c1, s1, c2, s2;

  void push_back(double theta1, double theta2);
  std::size_t size() const noexcept { return c1.size(); }
  HalfAngleBatch view() const noexcept { return {c1.data(), s1.data(), c2.data(), s2.data(), c1.size()}; }
};

/// out[p] = sum_s xi[s] T_s(p).
using MeanFn = void (*)(const HalfAngleBatch&, const double* xi, double* out);
/// out[p] = T(p)^T cov T(p), cov row-major 25x25 and symmetric.
using QuadFormFn = void (*)(const HalfAngleBatch&, const double* cov, double* out);
/// a += sum_p w[p] T(p) T(p)^T (row-major 25x25), j += sum_p w[p] y[p] T(p).
using NormalFn = void (*)(const HalfAngleBatch&, const double* w, const double* y, double* a, double* j);

struct KernelTable {
  std::string_view name;
  MeanFn mean;
  QuadFormFn quad_form;
  NormalFn accumulate_normal;
};

namespace scalar {
void mean(const HalfAngleBatch& b, const double* xi, double* out);
void quad_form(const HalfAngleBatch& b, const double* cov, double* out);
void accumulate_normal(const HalfAngleBatch& b, const double* w, const double* y, double* a, double* j);
}  // namespace scalar

#if defined(PGPR_HAVE_AVX2_KERNELS)
namespace avx2 {
void mean(const HalfAngleBatch& b, const double* xi, double* out);
void quad_form(const HalfAngleBatch& b, const double* cov, double* out);
void accumulate_normal(const HalfAngleBatch& b, const double* w, const double* y, double* a, double* j);
}  // namespace avx2
#endif

const KernelTable& scalar_kernels();
/// Null when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// Kernels chosen once per process: AVX2 when available unless the
/// PGPR_FORCE_SCALAR environment variable is set to a non-empty value.
const KernelTable& active_kernels();

}  // namespace pgpr::kernels
