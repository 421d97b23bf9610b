#pragma once

#include <span>
#include <vector>

namespace mdpc::linalg {

// Solves the dense system A x = b in place with partially pivoted Gaussian
// elimination. A is row-major n x n and is destroyed; b becomes x.
// Throws std::runtime_error on a (numerically) singular pivot.
void lu_solve(std::vector<double>& a, std::vector<double>& b, int n);

// max_i |(A x - b)_i| for row-major A.
double residual_inf(std::span<const double> a, std::span<const double> x,
                    std::span<const double> b, int n);

}  // namespace mdpc::linalg
