#include "mdpc/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "mdpc/kernels.hpp"

namespace mdpc::linalg {

void lu_solve(std::vector<double>& a, std::vector<double>& b, int n) {
  const std::size_t un = static_cast<std::size_t>(n);
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    double best = std::fabs(a[un * k + k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::fabs(a[un * i + k]);
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0) throw std::runtime_error("lu_solve: singular matrix");
    if (pivot != k) {
      for (int j = k; j < n; ++j) std::swap(a[un * pivot + j], a[un * k + j]);
      std::swap(b[pivot], b[k]);
    }
    const double inv = 1.0 / a[un * k + k];
    const std::size_t tail = un - static_cast<std::size_t>(k) - 1;
    for (int i = k + 1; i < n; ++i) {
      const double m = a[un * i + k] * inv;
      if (m == 0.0) continue;
      a[un * i + k] = 0.0;
      kernels::axpy(-m, {&a[un * k + k + 1], tail}, {&a[un * i + k + 1], tail});
      b[i] -= m * b[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    const std::size_t tail = un - static_cast<std::size_t>(i) - 1;
    const double s = kernels::dot({&a[un * i + i + 1], tail}, {&b[static_cast<std::size_t>(i) + 1], tail});
    b[i] = (b[i] - s) / a[un * i + i];
  }
}

double residual_inf(std::span<const double> a, std::span<const double> x,
                    std::span<const double> b, int n) {
  double worst = 0.0;
  const std::size_t un = static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i) {
    const double r = kernels::dot(a.subspan(un * i, un), x) - b[i];
    worst = std::max(worst, std::fabs(r));
  }
  return worst;
}

}  // namespace mdpc::linalg
