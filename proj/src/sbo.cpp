#include "lapdict/sbo.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lapdict {

bool BlockUnion::orthonormal(double tol) const {
    for (const auto& q : blocks) {
        if (q.rows() != m || q.cols() != m) return false;
        const Eigen::MatrixXd gram = q.transpose() * q;
        if ((gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

Eigen::MatrixXd orthogonalize_laplacian(const LaplacianMatrix& L, double eps) {
    if (L.rows() != L.cols()) throw std::invalid_argument("orthogonalize_laplacian: matrix not square");
    const Eigen::MatrixXd regularized =
        L + eps * Eigen::MatrixXd::Identity(L.rows(), L.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(regularized, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

BlockChoice sbo_represent(const BlockUnion& u, const Eigen::VectorXd& y, int s) {
    if (u.blocks.empty()) throw std::invalid_argument("sbo_represent: empty union");
    BlockChoice best;
    best.block = -1;
    for (int i = 0; i < u.block_count(); ++i) {
        SparseCode code = select_threshold(u.blocks[static_cast<std::size_t>(i)].transpose() * y, s);
        double energy = 0.0;
        for (const auto v : code.values) energy += v * v;
        if (best.block < 0 || energy > best.energy) {
            best.block = i;
            best.code = std::move(code);
            best.energy = energy;
        }
    }
    return best;
}

std::optional<Eigen::MatrixXd> procrustes_update(const Eigen::MatrixXd& Y_j,
                                                 const Eigen::MatrixXd& X_j) {
    if (Y_j.cols() != X_j.cols() || Y_j.cols() < 1)
        throw std::invalid_argument("procrustes_update: column mismatch");
    const Eigen::MatrixXd m = X_j * Y_j.transpose();
    if (m.cwiseAbs().maxCoeff() <= 1e-14) return std::nullopt;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixV() * svd.matrixU().transpose();
}

namespace {

// Orthogonal factor of I + scale*G with the QR sign convention fixed, used
// to spread the members of one expansion batch.
Eigen::MatrixXd random_rotation(int m, double scale, Rng& rng) {
    Eigen::MatrixXd jitter(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) jitter(i, j) = rng.normal();
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m) + scale * jitter;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < m; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

// Full orthonormal basis ordered by the energy of W's left singular space.
Eigen::MatrixXd worst_set_basis(const Eigen::MatrixXd& w) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(w, Eigen::ComputeFullU);
    return svd.matrixU();
}

struct Assignment {
    std::vector<int> block_of;
    std::vector<Eigen::VectorXd> code_of;   // dense codes
    std::vector<double> error_of;
    double total_error = 0.0;
};

Assignment assign_all(const BlockUnion& u, const Eigen::MatrixXd& Y, int s) {
    const auto n = Y.cols();
    Assignment a;
    a.block_of.resize(static_cast<std::size_t>(n));
    a.code_of.resize(static_cast<std::size_t>(n));
    a.error_of.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd y = Y.col(i);
        BlockChoice choice = sbo_represent(u, y, s);
        // orthonormal blocks: ||y - Q x||^2 = ||y||^2 - ||x||^2
        a.block_of[static_cast<std::size_t>(i)] = choice.block;
        a.code_of[static_cast<std::size_t>(i)] = choice.code.dense();
        a.error_of[static_cast<std::size_t>(i)] = y.squaredNorm() - choice.energy;
        a.total_error += a.error_of[static_cast<std::size_t>(i)];
    }
    return a;
}

// Worst ceil(nu * N) signal indices by current representation error.
std::vector<Eigen::Index> worst_fraction(const std::vector<double>& errors, double nu) {
    const auto n = errors.size();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return errors[static_cast<std::size_t>(a)] > errors[static_cast<std::size_t>(b)];
    });
    auto count = static_cast<std::size_t>(std::ceil(nu * static_cast<double>(n)));
    count = std::clamp<std::size_t>(count, 1, n);
    order.resize(count);
    return order;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& Y, const std::vector<Eigen::Index>& idx) {
    Eigen::MatrixXd out(Y.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = Y.col(idx[i]);
    return out;
}

// One full refinement stage: `rounds` sweeps of re-assignment followed by
// per-block code recomputation and Procrustes refresh.
void refine_stage(BlockUnion& u, const Eigen::MatrixXd& Y, const SboConfig& cfg, Rng& rng,
                  SboTrainStats* stats) {
    for (int r = 0; r < cfg.rounds; ++r) {
        Assignment a = assign_all(u, Y, cfg.sparsity);
        if (stats) stats->error_trace.push_back(a.total_error);
        for (int j = 0; j < u.block_count(); ++j) {
            std::vector<Eigen::Index> members;
            for (Eigen::Index i = 0; i < Y.cols(); ++i) {
                if (a.block_of[static_cast<std::size_t>(i)] == j) members.push_back(i);
            }
            if (members.empty()) {
                const auto worst = worst_fraction(a.error_of, cfg.nu);
                u.blocks[static_cast<std::size_t>(j)] =
                    worst_set_basis(gather(Y, worst)) * random_rotation(u.m, 0.1, rng);
                if (stats) ++stats->replaced_blocks;
                continue;
            }
            Eigen::MatrixXd yj(u.m, static_cast<Eigen::Index>(members.size()));
            Eigen::MatrixXd xj(u.m, static_cast<Eigen::Index>(members.size()));
            const auto& q = u.blocks[static_cast<std::size_t>(j)];
            for (std::size_t t = 0; t < members.size(); ++t) {
                yj.col(static_cast<Eigen::Index>(t)) = Y.col(members[t]);
                xj.col(static_cast<Eigen::Index>(t)) =
                    select_threshold(q.transpose() * yj.col(static_cast<Eigen::Index>(t)), cfg.sparsity)
                        .dense();
            }
            if (auto refreshed = procrustes_update(yj, xj)) {
                u.blocks[static_cast<std::size_t>(j)] = std::move(*refreshed);
            }
        }
    }
}

}  // namespace

BlockUnion sbo_train(const Eigen::MatrixXd& Y, const SboConfig& cfg,
                     const std::vector<Eigen::MatrixXd>& init, Rng& rng, SboTrainStats* stats) {
    if (init.empty()) throw std::invalid_argument("sbo_train: need at least one initial block");
    if (cfg.l_target < static_cast<int>(init.size()))
        throw std::invalid_argument("sbo_train: l_target below initial block count");
    if (cfg.nu <= 0.0 || cfg.nu > 1.0) throw std::invalid_argument("sbo_train: nu outside (0, 1]");
    if (cfg.parallel_batch < 1) throw std::invalid_argument("sbo_train: parallel_batch must be >= 1");

    BlockUnion u;
    u.m = static_cast<int>(Y.rows());
    u.blocks = init;
    if (!u.orthonormal(1e-8)) throw std::invalid_argument("sbo_train: initial blocks not orthonormal");

    while (true) {
        refine_stage(u, Y, cfg, rng, stats);
        if (u.block_count() >= cfg.l_target) break;

        // Expansion: seed a batch of blocks on the worst-represented set and
        // give them a short training of their own before joining the union.
        const Assignment a = assign_all(u, Y, cfg.sparsity);
        const auto worst = worst_fraction(a.error_of, cfg.nu);
        const Eigen::MatrixXd w = gather(Y, worst);
        const Eigen::MatrixXd base = worst_set_basis(w);
        const int batch = std::min(cfg.parallel_batch, cfg.l_target - u.block_count());

        BlockUnion fresh;
        fresh.m = u.m;
        for (int b = 0; b < batch; ++b) fresh.blocks.push_back(base * random_rotation(u.m, 0.1, rng));
        SboConfig brief = cfg;
        brief.rounds = cfg.new_block_rounds;
        refine_stage(fresh, w, brief, rng, nullptr);

        for (auto& q : fresh.blocks) u.blocks.push_back(std::move(q));
    }
    return u;
}

std::uint32_t sbo_classify(const std::vector<BlockUnion>& models, const Eigen::VectorXd& y, int s) {
    if (models.empty()) throw std::invalid_argument("sbo_classify: no class models");
    std::uint32_t best_class = 0;
    double best_energy = -1.0;
    bool first = true;
    for (std::size_t c = 0; c < models.size(); ++c) {
        for (const auto& q : models[c].blocks) {
            SparseCode code = select_threshold(q.transpose() * y, s);
            double energy = 0.0;
            for (const auto v : code.values) energy += v * v;
            if (first || energy > best_energy) {
                best_energy = energy;
                best_class = static_cast<std::uint32_t>(c);
                first = false;
            }
        }
    }
    return best_class;
}

}  // namespace lapdict
