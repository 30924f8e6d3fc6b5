#include "lbd/nullspace.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <stdexcept>

namespace lbd {

NullspaceResult nullspace_min(int rows, int cols, const std::vector<std::complex<double>>& a) {
    if (cols < 1 || rows < 1) throw std::invalid_argument("nullspace_min: empty matrix");
    if (a.size() != static_cast<size_t>(rows) * cols)
        throw std::invalid_argument("nullspace_min: data size does not match extents");

    Eigen::MatrixXcd A(rows, cols);
    double norm = 0.0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            A(r, c) = a[static_cast<size_t>(r) * cols + c];
            norm += std::norm(A(r, c));
        }
    if (norm == 0.0) throw std::invalid_argument("nullspace_min: all-zero matrix is degenerate");

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    Eigen::VectorXcd x = svd.matrixV().col(cols - 1);

    NullspaceResult out;
    out.x.assign(x.data(), x.data() + cols);
    out.residual = (A * x).norm();
    const auto& sv = svd.singularValues();
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    out.singular_values.resize(static_cast<size_t>(cols), 0.0);  // pad when rows < cols
    return out;
}

}  // namespace lbd
