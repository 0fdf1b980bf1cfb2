#pragma once

#include "pgpr/kernels/basis.hpp"

namespace pgpr::kernels::detail {

inline constexpr int kOrder = 4;
inline constexpr int kRow = kOrder + 1;
inline constexpr int kSize = kRow * kRow;

// row[i] = c^i s^(4-i), with the multiplication order shared by every variant.
template <class V, class Mul>
inline void power_row(V c, V s, V one, V* row, Mul mul) {
  V cp[kRow], sp[kRow];
  cp[0] = one;
  sp[0] = one;
  for (int k = 1; k < kRow; ++k) {
    cp[k] = mul(cp[k - 1], c);
    sp[k] = mul(sp[k - 1], s);
  }
  for (int i = 0; i < kRow; ++i) row[i] = mul(cp[i], sp[kOrder - i]);
}

}  // namespace pgpr::kernels::detail
