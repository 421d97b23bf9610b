#pragma once

#include <cstddef>
#include <span>

// Numeric inner loops used by the dense solver and the distance code.
// Scalar reference implementations plus AVX2 variants; the active set is
// picked once at runtime from CPU features and can be forced for testing.
namespace mdpc::kernels {

enum class Isa { scalar, avx2 };

Isa active();
bool avx2_available();
// Force a specific implementation (throws if unavailable on this CPU).
void force(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
// y += c * x
void axpy(double c, std::span<const double> x, std::span<double> y);
double l1_diff(std::span<const double> a, std::span<const double> b);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

namespace scalar_impl {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double c, const double* x, double* y, std::size_t n);
double l1_diff(const double* a, const double* b, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
}  // namespace scalar_impl

namespace avx2_impl {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double c, const double* x, double* y, std::size_t n);
double l1_diff(const double* a, const double* b, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
}  // namespace avx2_impl

}  // namespace mdpc::kernels
