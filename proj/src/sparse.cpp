#include "lapdict/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lapdict {

Eigen::VectorXd SparseCode::dense() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ambient_dim);
    for (std::size_t k = 0; k < support.size(); ++k) x(support[k]) = values[k];
    return x;
}

namespace {

// Incrementally orthogonalized column set for the greedy refits. Keeps
// Q (orthonormal), R (upper triangular) and Q^T y so that coefficients come
// from one back substitution.
class QrPursuit {
public:
    QrPursuit(Eigen::Index dim, int capacity, const Eigen::VectorXd& y)
        : q_(dim, capacity), r_(Eigen::MatrixXd::Zero(capacity, capacity)), qty_(capacity), residual_(y) {}

    // Returns false when `col` is numerically dependent on the accepted set.
    bool try_add(const Eigen::VectorXd& col) {
        const int k = count_;
        Eigen::VectorXd w(k), q = col;
        if (k > 0) {
            w = q_.leftCols(k).transpose() * col;
            q -= q_.leftCols(k) * w;
            // one re-orthogonalization pass
            Eigen::VectorXd w2 = q_.leftCols(k).transpose() * q;
            q -= q_.leftCols(k) * w2;
            w += w2;
        }
        const double qnorm = q.norm();
        if (qnorm <= 1e-10 * std::max(1.0, col.norm())) return false;
        q /= qnorm;
        q_.col(k) = q;
        if (k > 0) r_.col(k).head(k) = w;
        r_(k, k) = qnorm;
        const double proj = q.dot(residual_);
        qty_(k) = proj;
        residual_ -= proj * q;
        ++count_;
        return true;
    }

    const Eigen::VectorXd& residual() const { return residual_; }
    int count() const { return count_; }

    // Coefficients of the accepted columns, in acceptance order.
    Eigen::VectorXd solve() const {
        return r_.topLeftCorner(count_, count_)
            .triangularView<Eigen::Upper>()
            .solve(qty_.head(count_));
    }

private:
    Eigen::MatrixXd q_, r_;
    Eigen::VectorXd qty_;
    Eigen::VectorXd residual_;
    int count_ = 0;
};

SparseCode finish_code(const std::vector<int>& picked, const QrPursuit& qr, int ambient_dim) {
    SparseCode code;
    code.ambient_dim = ambient_dim;
    if (picked.empty()) return code;
    const Eigen::VectorXd coeffs = qr.solve();
    std::vector<std::size_t> order(picked.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return picked[a] < picked[b]; });
    for (const auto k : order) {
        code.support.push_back(picked[k]);
        code.values.push_back(coeffs(static_cast<Eigen::Index>(k)));
    }
    return code;
}

}  // namespace

SparseCode omp(const Eigen::MatrixXd& D, const Eigen::VectorXd& y, int s, double tol,
               PursuitStats* stats) {
    const Eigen::Index m = D.rows();
    const Eigen::Index n = D.cols();
    if (y.size() != m) throw std::invalid_argument("omp: dimension mismatch");
    if (s < 0 || s > std::min(m, n)) throw std::invalid_argument("omp: invalid sparsity");
    if (tol <= 0.0) tol = 1e-9 * y.norm();

    QrPursuit qr(m, s, y);
    std::vector<int> picked;
    std::vector<char> excluded(static_cast<std::size_t>(n), 0);

    while (qr.count() < s && qr.residual().norm() > tol) {
        Eigen::VectorXd corr = D.transpose() * qr.residual();
        if (stats) {
            stats->correlation_mults += static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(n);
            ++stats->iterations;
        }
        bool advanced = false;
        std::vector<char> skipped = excluded;
        while (!advanced) {
            int best = -1;
            double best_abs = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (skipped[static_cast<std::size_t>(j)]) continue;
                const double a = std::abs(corr(j));
                if (a > best_abs) {
                    best_abs = a;
                    best = static_cast<int>(j);
                }
            }
            if (best < 0 || best_abs == 0.0) break;  // residual orthogonal to every candidate
            if (qr.try_add(D.col(best))) {
                picked.push_back(best);
                excluded[static_cast<std::size_t>(best)] = 1;
                advanced = true;
            } else {
                skipped[static_cast<std::size_t>(best)] = 1;  // degenerate candidate, take next best
            }
        }
        if (!advanced) break;
    }
    return finish_code(picked, qr, static_cast<int>(n));
}

SparseCode omp2d(const Eigen::MatrixXd& D1, const Eigen::MatrixXd& D2, const Eigen::MatrixXd& Y,
                 int s, double tol, PursuitStats* stats) {
    const Eigen::Index m1 = D1.rows(), n1 = D1.cols();
    const Eigen::Index m2 = D2.rows(), n2 = D2.cols();
    if (Y.rows() != m1 || Y.cols() != m2) throw std::invalid_argument("omp2d: dimension mismatch");
    if (s < 0 || s > std::min(m1 * m2, n1 * n2)) throw std::invalid_argument("omp2d: invalid sparsity");

    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(Y.data(), m1 * m2);
    if (tol <= 0.0) tol = 1e-9 * y.norm();

    QrPursuit qr(m1 * m2, s, y);
    std::vector<int> picked;
    std::vector<char> excluded(static_cast<std::size_t>(n1 * n2), 0);

    Eigen::VectorXd pair_col(m1 * m2);
    while (qr.count() < s && qr.residual().norm() > tol) {
        const auto R = Eigen::Map<const Eigen::MatrixXd>(qr.residual().data(), m1, m2);
        // correlations over all atom pairs: C(j1, j2) = D1_j1^T R D2_j2
        const Eigen::MatrixXd corr = (D1.transpose() * R) * D2;
        if (stats) {
            stats->correlation_mults +=
                static_cast<std::uint64_t>(n1) * static_cast<std::uint64_t>(m1) * static_cast<std::uint64_t>(m2) +
                static_cast<std::uint64_t>(n1) * static_cast<std::uint64_t>(n2) * static_cast<std::uint64_t>(m2);
            ++stats->iterations;
        }
        bool advanced = false;
        std::vector<char> skipped = excluded;
        while (!advanced) {
            int best = -1;
            double best_abs = 0.0;
            // scan in Kronecker column order (j2 * n1 + j1) so ties match omp
            for (Eigen::Index j2 = 0; j2 < n2; ++j2) {
                for (Eigen::Index j1 = 0; j1 < n1; ++j1) {
                    const int lin = static_cast<int>(j2 * n1 + j1);
                    if (skipped[static_cast<std::size_t>(lin)]) continue;
                    const double a = std::abs(corr(j1, j2));
                    if (a > best_abs) {
                        best_abs = a;
                        best = lin;
                    }
                }
            }
            if (best < 0 || best_abs == 0.0) break;
            const Eigen::Index j1 = best % n1, j2 = best / n1;
            // vec(D1_j1 * D2_j2^T) = kron(D2_j2, D1_j1)
            Eigen::Map<Eigen::MatrixXd>(pair_col.data(), m1, m2) = D1.col(j1) * D2.col(j2).transpose();
            if (qr.try_add(pair_col)) {
                picked.push_back(best);
                excluded[static_cast<std::size_t>(best)] = 1;
                advanced = true;
            } else {
                skipped[static_cast<std::size_t>(best)] = 1;
            }
        }
        if (!advanced) break;
    }
    return finish_code(picked, qr, static_cast<int>(n1 * n2));
}

Eigen::MatrixXd reconstruct_pair(const Eigen::MatrixXd& D1, const Eigen::MatrixXd& D2,
                                 const SparseCode& code) {
    const Eigen::Index n1 = D1.cols();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(D1.rows(), D2.rows());
    for (std::size_t k = 0; k < code.support.size(); ++k) {
        const Eigen::Index j1 = code.support[k] % n1;
        const Eigen::Index j2 = code.support[k] / n1;
        out += code.values[k] * (D1.col(j1) * D2.col(j2).transpose());
    }
    return out;
}

SparseCode select_threshold(const Eigen::VectorXd& x, int s) {
    const auto n = static_cast<int>(x.size());
    if (s < 0 || s > n) throw std::invalid_argument("select_threshold: invalid sparsity");
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    // stable sort keeps the lowest index first among equal magnitudes
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return std::abs(x(a)) > std::abs(x(b)); });
    idx.resize(static_cast<std::size_t>(s));
    std::sort(idx.begin(), idx.end());

    SparseCode code;
    code.ambient_dim = n;
    for (const auto j : idx) {
        code.support.push_back(j);
        code.values.push_back(x(j));
    }
    return code;
}

Eigen::VectorXd project_simplex_type(const Eigen::VectorXd& v, int ell) {
    const auto m = static_cast<int>(v.size());
    if (ell < 0 || ell >= m) throw std::invalid_argument("project_simplex_type: ell out of range");
    const double vl = v(ell);

    // The projection solves d_ell = max(vl - tau, 0), d_j = min(v_j - tau, 0)
    // where tau is the multiplier of 1^T d = 0, found as the root of the
    // piecewise-linear, nonincreasing g(tau) = sum_j d_j(tau).
    std::vector<double> bp(v.data(), v.data() + m);
    std::sort(bp.begin(), bp.end());

    auto g_at = [&](double tau, double sum_le, int cnt_le) {
        return std::max(vl - tau, 0.0) + (sum_le - static_cast<double>(cnt_le) * tau);
    };

    // Walk breakpoints accumulating the "min" terms with v_j <= tau, j != ell.
    double sum_le = 0.0;
    int cnt_le = 0;
    bool ell_skipped = false;
    double tau = bp.back();  // overwritten below; placeholder
    bool found = false;
    double prev_sum = 0.0;
    int prev_cnt = 0;
    for (int t = 0; t < m && !found; ++t) {
        prev_sum = sum_le;
        prev_cnt = cnt_le;
        if (!ell_skipped && bp[t] == vl) {
            ell_skipped = true;  // this breakpoint is the distinguished entry
        } else {
            sum_le += bp[t];
            ++cnt_le;
        }
        const double g = g_at(bp[t], sum_le, cnt_le);
        if (g <= 0.0) {
            if (g == 0.0) {
                tau = bp[t];
            } else {
                // root inside (bp[t-1], bp[t]): slope terms of that interval
                const bool max_active = vl >= bp[t];
                const double num = prev_sum + (max_active ? vl : 0.0);
                const int den = prev_cnt + (max_active ? 1 : 0);
                tau = num / static_cast<double>(den);
            }
            found = true;
        }
    }
    if (!found) {
        // root beyond the largest breakpoint: every min term active, max inactive
        tau = sum_le / static_cast<double>(cnt_le);
    }

    Eigen::VectorXd d(m);
    for (int j = 0; j < m; ++j) d(j) = std::min(v(j) - tau, 0.0);
    d(ell) = std::max(vl - tau, 0.0);
    return d;
}

std::vector<int> normalize_columns(Eigen::MatrixXd& D, Rng* rng, double eps) {
    std::vector<int> replaced;
    for (Eigen::Index j = 0; j < D.cols(); ++j) {
        const double norm = D.col(j).norm();
        if (norm <= eps) {
            if (!rng) throw std::invalid_argument("normalize_columns: zero column");
            replaced.push_back(static_cast<int>(j));
            Eigen::VectorXd r(D.rows());
            for (Eigen::Index i = 0; i < D.rows(); ++i) r(i) = rng->normal();
            D.col(j) = r / r.norm();
        } else {
            D.col(j) /= norm;
        }
    }
    return replaced;
}

}  // namespace lapdict
