#include "mdpc/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace mdpc::kernels {

namespace scalar_impl {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc = std::fma(a[i], b[i], acc);
  return acc;
}

void axpy(double c, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(c, x[i], y[i]);
}

double l1_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  return acc;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

}  // namespace scalar_impl

namespace {

struct Dispatch {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*l1_diff)(const double*, const double*, std::size_t);
  double (*max_abs_diff)(const double*, const double*, std::size_t);
};

constexpr Dispatch kScalar{Isa::scalar, scalar_impl::dot, scalar_impl::axpy,
                           scalar_impl::l1_diff, scalar_impl::max_abs_diff};

#if MDPC_HAVE_AVX2
constexpr Dispatch kAvx2{Isa::avx2, avx2_impl::dot, avx2_impl::axpy,
                         avx2_impl::l1_diff, avx2_impl::max_abs_diff};
#endif

bool detect_avx2() {
#if MDPC_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Dispatch select_default() {
#if MDPC_HAVE_AVX2
  if (detect_avx2()) return kAvx2;
#endif
  return kScalar;
}

Dispatch g_dispatch = select_default();

}  // namespace

Isa active() { return g_dispatch.isa; }

bool avx2_available() { return detect_avx2(); }

void force(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      g_dispatch = kScalar;
      return;
    case Isa::avx2:
#if MDPC_HAVE_AVX2
      if (detect_avx2()) {
        g_dispatch = kAvx2;
        return;
      }
#endif
      throw std::runtime_error("kernels: avx2 not available on this cpu/build");
  }
  throw std::runtime_error("kernels: unknown isa");
}

double dot(std::span<const double> a, std::span<const double> b) {
  return g_dispatch.dot(a.data(), b.data(), a.size());
}

void axpy(double c, std::span<const double> x, std::span<double> y) {
  g_dispatch.axpy(c, x.data(), y.data(), x.size());
}

double l1_diff(std::span<const double> a, std::span<const double> b) {
  return g_dispatch.l1_diff(a.data(), b.data(), a.size());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return g_dispatch.max_abs_diff(a.data(), b.data(), a.size());
}

}  // namespace mdpc::kernels
