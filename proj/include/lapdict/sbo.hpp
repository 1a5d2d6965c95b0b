#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "lapdict/graph.hpp"
#include "lapdict/rng.hpp"
#include "lapdict/sparse.hpp"

namespace lapdict {

// Dictionary made of m x m orthonormal blocks Q_1..Q_L.
struct BlockUnion {
    int m = 0;
    std::vector<Eigen::MatrixXd> blocks;
    std::vector<int> class_of_block;  // class id per block (pooled classification)

    int block_count() const { return static_cast<int>(blocks.size()); }
    bool orthonormal(double tol = 1e-10) const;
};

// Orthogonal polar factor of L + eps*I via SVD (U V^T). The regularization
// keeps the factor well defined across the Laplacian null space.
Eigen::MatrixXd orthogonalize_laplacian(const LaplacianMatrix& L, double eps = 1e-8);

struct BlockChoice {
    int block = 0;
    SparseCode code;
    double energy = 0.0;
};

// Highest-energy block for y: x_i = select_threshold(Q_i^T y, s),
// E_i = ||x_i||^2, ties going to the lowest block index. Under orthonormal
// blocks this is exactly the representation-error minimizer.
BlockChoice sbo_represent(const BlockUnion& u, const Eigen::VectorXd& y, int s);

// Orthogonal Procrustes solution: with X Y^T = U S V^T the error
// ||Y - Q X||_F is minimized by Q = V U^T. Returns nullopt when X Y^T is
// numerically zero (caller keeps the previous block).
std::optional<Eigen::MatrixXd> procrustes_update(const Eigen::MatrixXd& Y_j,
                                                 const Eigen::MatrixXd& X_j);

struct SboConfig {
    int l_target = 48;      // final number of blocks
    int sparsity = 4;
    int rounds = 7;         // refinement sweeps per expansion stage
    double nu = 0.3;        // fraction of worst-represented signals
    int parallel_batch = 6; // blocks grown per expansion
    int new_block_rounds = 2;
};

struct SboTrainStats {
    std::vector<double> error_trace;  // total error after every refinement sweep
    int replaced_blocks = 0;          // empty-assignment replacements
};

// SBO with parallel expansion: refine the current union (assignment sweep,
// per-block thresholded codes, Procrustes refresh), then grow
// `parallel_batch` new blocks from the nu-fraction worst-represented
// signals until l_target blocks exist; finishes with one more refinement
// stage. `init` blocks must be orthonormal.
BlockUnion sbo_train(const Eigen::MatrixXd& Y, const SboConfig& cfg,
                     const std::vector<Eigen::MatrixXd>& init, Rng& rng,
                     SboTrainStats* stats = nullptr);

// Pools the blocks of all class unions and reports the class owning the
// winning block of sbo_represent.
std::uint32_t sbo_classify(const std::vector<BlockUnion>& models, const Eigen::VectorXd& y, int s);

}  // namespace lapdict
