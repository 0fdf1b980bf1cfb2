#include "basis_common.hpp"

namespace pgpr::kernels::scalar {

using namespace detail;

namespace {

inline double mul(double a, double b) { return a * b; }

inline void basis_at(const HalfAngleBatch& b, std::size_t p, double* t) {
  double r1[kRow], r2[kRow];
  power_row(b.c1[p], b.s1[p], 1.0, r1, mul);
  power_row(b.c2[p], b.s2[p], 1.0, r2, mul);
  for (int i = 0; i < kRow; ++i)
    for (int j = 0; j < kRow; ++j) t[kRow * i + j] = r1[i] * r2[j];
}

}  // namespace

void mean(const HalfAngleBatch& b, const double* xi, double* out) {
  for (std::size_t p = 0; p < b.count; ++p) {
    double r1[kRow], r2[kRow];
    power_row(b.c1[p], b.s1[p], 1.0, r1, mul);
    power_row(b.c2[p], b.s2[p], 1.0, r2, mul);
    double acc = 0.0;
    for (int i = 0; i < kRow; ++i) {
      double inner = 0.0;
      for (int j = 0; j < kRow; ++j) inner += r2[j] * xi[kRow * i + j];
      acc += r1[i] * inner;
    }
    out[p] = acc;
  }
}

void quad_form(const HalfAngleBatch& b, const double* cov, double* out) {
  double t[kSize];
  for (std::size_t p = 0; p < b.count; ++p) {
    basis_at(b, p, t);
    double acc = 0.0;
    for (int s = 0; s < kSize; ++s) {
      double row = 0.0;
      for (int u = 0; u < kSize; ++u) row += cov[kSize * s + u] * t[u];
      acc += t[s] * row;
    }
    out[p] = acc;
  }
}

void accumulate_normal(const HalfAngleBatch& b, const double* w, const double* y, double* a, double* j) {
  double t[kSize];
  for (std::size_t p = 0; p < b.count; ++p) {
    basis_at(b, p, t);
    for (int s = 0; s < kSize; ++s) {
      const double wt = w[p] * t[s];
      j[s] += wt * y[p];
      for (int u = s; u < kSize; ++u) a[kSize * s + u] += wt * t[u];
    }
  }
  for (int s = 0; s < kSize; ++s)
    for (int u = 0; u < s; ++u) a[kSize * s + u] = a[kSize * u + s];
}

}  // namespace pgpr::kernels::scalar
