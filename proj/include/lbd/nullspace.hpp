#pragma once

#include <complex>
#include <vector>

namespace lbd {

struct NullspaceResult {
    std::vector<std::complex<double>> x;   // unit 2-norm minimizer of ||Ax||
    double residual = 0.0;                 // ||A x||_2
    std::vector<double> singular_values;   // descending
};

// Minimal right singular direction of a complex matrix (row-major, rows x cols).
NullspaceResult nullspace_min(int rows, int cols, const std::vector<std::complex<double>>& a);

}  // namespace lbd
