#pragma once

// Independent reference implementations used only to cross-check the
// library. These deliberately take the slow, exhaustive route.

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <vector>

namespace lapdict::testing {

// Exact projection onto { d : 1^T d = 0, d_ell >= 0, d_j <= 0 (j != ell) }
// by enumerating every subset of coordinates clamped to zero. For each
// active set the free coordinates minimize ||d - v|| subject to the sum
// constraint alone (mean removal); the best feasible candidate is the
// projection. O(2^m * m), usable for m <= ~16.
inline Eigen::VectorXd project_simplex_type_bruteforce(const Eigen::VectorXd& v, int ell) {
    const int m = static_cast<int>(v.size());
    Eigen::VectorXd best = Eigen::VectorXd::Zero(m);  // feasible fallback
    double best_dist = best.squaredNorm() - 0.0;      // distance to v computed below
    best_dist = (best - v).squaredNorm();
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        // bit j set -> coordinate j clamped to zero
        int free_count = 0;
        double free_sum = 0.0;
        for (int j = 0; j < m; ++j) {
            if (!(mask & (1u << j))) {
                ++free_count;
                free_sum += v(j);
            }
        }
        if (free_count == 0) continue;  // the all-zero candidate is the fallback
        const double shift = free_sum / free_count;
        Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
        bool feasible = true;
        for (int j = 0; j < m && feasible; ++j) {
            if (mask & (1u << j)) continue;
            d(j) = v(j) - shift;
            if (j == ell ? (d(j) < 0.0) : (d(j) > 0.0)) feasible = false;
        }
        if (!feasible) continue;
        const double dist = (d - v).squaredNorm();
        if (dist < best_dist) {
            best_dist = dist;
            best = d;
        }
    }
    return best;
}

struct SubsetFit {
    double residual = std::numeric_limits<double>::infinity();
    std::vector<int> support;
    Eigen::VectorXd coefficients;
};

// Best s-sparse least-squares fit by enumerating every support.
inline SubsetFit best_subset_fit(const Eigen::MatrixXd& D, const Eigen::VectorXd& y, int s) {
    const int n = static_cast<int>(D.cols());
    std::vector<int> support(static_cast<std::size_t>(s));
    SubsetFit best;
    std::function<void(int, int)> recurse = [&](int start, int depth) {
        if (depth == s) {
            Eigen::MatrixXd sub(D.rows(), s);
            for (int k = 0; k < s; ++k) sub.col(k) = D.col(support[static_cast<std::size_t>(k)]);
            const Eigen::VectorXd coef = sub.colPivHouseholderQr().solve(y);
            const double res = (y - sub * coef).norm();
            if (res < best.residual) {
                best.residual = res;
                best.support = support;
                best.coefficients = coef;
            }
            return;
        }
        for (int j = start; j < n; ++j) {
            support[static_cast<std::size_t>(depth)] = j;
            recurse(j + 1, depth + 1);
        }
    };
    recurse(0, 0);
    return best;
}

}  // namespace lapdict::testing
