#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lapdict/rng.hpp"

namespace lapdict {

// s-sparse code of one signal: distinct support indices below ambient_dim
// with aligned coefficient values. For pair codes (omp2d) an index encodes
// the atom pair (j1, j2) as j2 * n1 + j1, matching the Kronecker column order.
struct SparseCode {
    std::vector<int> support;
    std::vector<double> values;
    int ambient_dim = 0;

    int size() const { return static_cast<int>(support.size()); }
    Eigen::VectorXd dense() const;
};

// Multiply counts of the dominant pursuit steps, for complexity checks.
struct PursuitStats {
    std::uint64_t correlation_mults = 0;
    int iterations = 0;
};

// Orthogonal matching pursuit with QR-updated least-squares refits.
// Columns of D must be unit-norm. Selection maximizes |D_j^T r|, ties going
// to the lowest index; candidates that leave the selected subdictionary
// rank-deficient are skipped. Stops at s atoms or ||r|| <= tol (tol <= 0
// means 1e-9 * ||y||).
SparseCode omp(const Eigen::MatrixXd& D, const Eigen::VectorXd& y, int s, double tol = -1.0,
               PursuitStats* stats = nullptr);

// 2D pursuit over atom pairs of (D1, D2); result contract matches
// omp(kron(D2, D1), vec(Y), s) without materializing the Kronecker product.
SparseCode omp2d(const Eigen::MatrixXd& D1, const Eigen::MatrixXd& D2, const Eigen::MatrixXd& Y,
                 int s, double tol = -1.0, PursuitStats* stats = nullptr);

// Reconstructs D1 * X * D2^T from a pair code.
Eigen::MatrixXd reconstruct_pair(const Eigen::MatrixXd& D1, const Eigen::MatrixXd& D2,
                                 const SparseCode& code);

// Keeps the s entries of largest magnitude (ties to the lowest index),
// zeroing the rest.
SparseCode select_threshold(const Eigen::VectorXd& x, int s);

// Euclidean projection onto the simplex-type set
//   X_ell = { d : 1^T d = 0, d_ell >= 0, d_j <= 0 for j != ell }
// via sorted breakpoint search on the equality multiplier, O(m log m).
// `ell` is 0-based.
Eigen::VectorXd project_simplex_type(const Eigen::VectorXd& v, int ell);

// Scales every column to unit norm in place. Columns with norm below `eps`
// are replaced by random unit vectors when an rng is supplied (their indices
// are returned); without an rng a zero column throws.
std::vector<int> normalize_columns(Eigen::MatrixXd& D, Rng* rng = nullptr, double eps = 1e-12);

}  // namespace lapdict
