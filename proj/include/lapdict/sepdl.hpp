#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lapdict/rng.hpp"
#include "lapdict/sparse.hpp"

namespace lapdict {

// Column-normalized dictionary pair for the 2D model Y ~ D1 * X * D2^T.
struct SeparableDictPair {
    Eigen::MatrixXd d1;  // m1 x n1
    Eigen::MatrixXd d2;  // m2 x n2
};

struct SepTrainStats {
    std::vector<double> rmse_trace;  // one entry per training iteration
    int replaced_atoms = 0;          // unused-atom replacements taken
};

// Pairwise AK-SVD: per iteration all signals are coded with omp2d, then
// every atom of D1 is refreshed with D2 frozen and vice versa, each with a
// single rank-1 alternation. Signals are the columns of Y, column-stacked
// m1 x m2 matrices. Unused atoms are replaced by the dominant left factor
// of the worst-represented signal.
SeparableDictPair pairwise_aksvd_train(const Eigen::MatrixXd& Y, int m1, int m2, int n1, int n2,
                                       int s, int iters, Rng& rng, SepTrainStats* stats = nullptr);

// RMSE = ||Y - D1 X D2^T||_F / sqrt(m1 m2 N) over the whole signal set.
double sep_rmse(const Eigen::MatrixXd& Y, int m1, int m2, const SeparableDictPair& pair,
                const std::vector<SparseCode>& codes);

// Per-class coding with omp2d followed by least-error class assignment
// (ties to the lowest class id). Optional `errors` receives the per-signal
// squared Frobenius reconstruction error, classes x signals.
std::vector<std::uint32_t> sep_classify(const std::vector<SeparableDictPair>& models,
                                        const Eigen::MatrixXd& Y, int m1, int m2, int s,
                                        Eigen::MatrixXd* errors = nullptr);

}  // namespace lapdict
