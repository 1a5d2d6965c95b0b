#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>

#include "lapdict/rng.hpp"

namespace lapdict::testing {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
    return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, Rng& rng) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
    return v;
}

// Haar-ish orthogonal matrix: QR of a Gaussian with the R-diagonal sign fix.
inline Eigen::MatrixXd random_orthogonal(Eigen::Index m, Rng& rng) {
    const Eigen::MatrixXd g = random_matrix(m, m, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < m; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

inline Eigen::MatrixXd random_unit_columns(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    Eigen::MatrixXd m = random_matrix(rows, cols, rng);
    for (Eigen::Index j = 0; j < cols; ++j) m.col(j).normalize();
    return m;
}

inline Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace lapdict::testing
