#pragma once

// Dense per-axis linear maps on grid-shaped complex data.

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "nlstrap/grid.hpp"

namespace nlstrap::detail {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// data <- (M along `axis`) data, where M is n_axis x n_axis and real. The
/// matrix acts on real and imaginary parts alike, so axes 0 and 1 reuse a
/// real GEMM on the interleaved storage.
inline void apply_axis_matrix(const Grid3& grid, std::vector<cplx>& data, int axis,
                              const RowMatrix& M) {
    const int n1 = grid.n(0), n2 = grid.n(1), n3 = grid.n(2);
    double* raw = reinterpret_cast<double*>(data.data());
    if (axis == 0) {
        Eigen::Map<RowMatrix> X(raw, n1, 2L * n2 * n3);
        RowMatrix out = M * X;
        X = out;
    } else if (axis == 1) {
        RowMatrix out(n2, 2L * n3);
        for (int a = 0; a < n1; ++a) {
            Eigen::Map<RowMatrix> X(raw + 2L * a * n2 * n3, n2, 2L * n3);
            out.noalias() = M * X;
            X = out;
        }
    } else {
        using CRow = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        Eigen::Map<CRow> X(data.data(), static_cast<Eigen::Index>(n1) * n2, n3);
        const CRow Mt = M.transpose().cast<cplx>();
        CRow out = X * Mt;
        X = out;
    }
}

}  // namespace nlstrap::detail
