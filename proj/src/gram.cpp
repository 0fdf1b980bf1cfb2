#include "pgpr/gram.hpp"

#include <cmath>
#include <stdexcept>

namespace pgpr {

double half_angle_integral(int a, int b) {
  if (a < 0 || b < 0) throw std::invalid_argument("negative power");
  if (b % 2 == 1) return 0.0;
  return 2.0 * std::beta(0.5 * (a + 1), 0.5 * (b + 1));
}

BasisMatrix gram_matrix() {
  static const BasisMatrix m = [] {
    BasisMatrix g;
    constexpr int n = kBasisOrder;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= n; ++k)
          for (int l = 0; l <= n; ++l)
            g(basis_index(i, j), basis_index(k, l)) = half_angle_integral(i + k, 2 * n - i - k) *
                                                      half_angle_integral(j + l, 2 * n - j - l);
    return g;
  }();
  return m;
}

}  // namespace pgpr
