#include "lapdict/lapdl.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lapdict/graph.hpp"

namespace lapdict {

double LapAtomDictionary::atom_trace(int i) const {
    double tr = 0.0;
    for (int j = 0; j < m; ++j) tr += atoms(static_cast<Eigen::Index>(j) * (m + 1), i);
    return tr;
}

bool LapAtomDictionary::feasible(double tol) const {
    for (int i = 0; i < atom_count(); ++i) {
        for (int ell = 0; ell < m; ++ell) {
            const auto block = atoms.col(i).segment(static_cast<Eigen::Index>(ell) * m, m);
            if (std::abs(block.sum()) > std::max(tol, 1e-12 * m)) return false;
            for (int j = 0; j < m; ++j) {
                const double x = block(j);
                if (j == ell ? (x < -tol) : (x > tol)) return false;
            }
        }
    }
    return true;
}

double f_rho(const LapAtomDictionary& D, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
             double rho) {
    if (D.atoms.rows() != Y.rows() || D.atoms.cols() != X.rows() || X.cols() != Y.cols())
        throw std::invalid_argument("f_rho: dimension mismatch");
    double penalty = 0.0;
    for (int i = 0; i < D.atom_count(); ++i) {
        const double d = D.atom_trace(i) - static_cast<double>(D.m);
        penalty += d * d;
    }
    return 0.5 * (Y - D.atoms * X).squaredNorm() + 0.5 * rho * penalty;
}

Eigen::VectorXd grad_atom_block(const LapAtomDictionary& D, const Eigen::MatrixXd& X,
                                const Eigen::MatrixXd& Y, double rho, int i, int ell) {
    const int m = D.m;
    if (i < 0 || i >= D.atom_count() || ell < 0 || ell >= m)
        throw std::invalid_argument("grad_atom_block: index out of range");
    // (DX - Y) (X^i)^T restricted to block ell; the residual form
    // D_i ||X^i||^2 - R_(i) (X^i)^T with R_(i) = Y - sum_{j != i} D_j X^j
    // is the same expression rearranged.
    const Eigen::VectorXd xi = X.row(i).transpose();
    Eigen::VectorXd g = D.atoms.middleRows(static_cast<Eigen::Index>(ell) * m, m) * (X * xi) -
                        Y.middleRows(static_cast<Eigen::Index>(ell) * m, m) * xi;
    g(ell) += rho * (D.atom_trace(i) - static_cast<double>(m));
    return g;
}

double lipschitz_atom(const Eigen::MatrixXd& X, int i, double rho) {
    if (i < 0 || i >= X.rows()) throw std::invalid_argument("lipschitz_atom: index out of range");
    return std::max(X.row(i).squaredNorm() + rho, 1e-12);
}

void bcgd_dict_update(LapAtomDictionary& D, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                      const LapDLConfig& cfg, Rng& rng, const BcgdObserver& observer) {
    const int m = D.m;
    const int n = D.atom_count();
    const int iters = cfg.bcgd_iters > 0 ? cfg.bcgd_iters : n * m * 5;

    // Gram caches fixed for the whole sweep (X does not change here).
    const Eigen::MatrixXd gram = X * X.transpose();   // n x n
    const Eigen::MatrixXd yxt = Y * X.transpose();    // m^2 x n
    Eigen::VectorXd traces(n);
    for (int i = 0; i < n; ++i) traces(i) = D.atom_trace(i);

    auto block_grad = [&](int i, int ell) {
        Eigen::VectorXd g =
            D.atoms.middleRows(static_cast<Eigen::Index>(ell) * m, m) * gram.col(i) -
            yxt.col(i).segment(static_cast<Eigen::Index>(ell) * m, m);
        g(ell) += cfg.rho * (traces(i) - static_cast<double>(m));
        return g;
    };

    const int sweep = n * m;
    for (int k = 0; k < iters; ++k) {
        const int i = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
        const int ell = static_cast<int>(rng.index(static_cast<std::size_t>(m)));
        const double lip = std::max(gram(i, i) + cfg.rho, 1e-12);

        auto block = D.atoms.col(i).segment(static_cast<Eigen::Index>(ell) * m, m);
        const Eigen::VectorXd stepped = block - block_grad(i, ell) / lip;
        const Eigen::VectorXd projected = project_simplex_type(stepped, ell);
        traces(i) += projected(ell) - block(ell);
        block = projected;

        if (observer) observer(D, i, ell);

        if (cfg.grad_tol > 0.0 && (k + 1) % sweep == 0) {
            double max_norm = 0.0;
            const int samples = std::min(sweep, 256);
            for (int t = 0; t < samples; ++t) {
                const int si = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
                const int sl = static_cast<int>(rng.index(static_cast<std::size_t>(m)));
                max_norm = std::max(max_norm, block_grad(si, sl).norm());
            }
            if (max_norm < cfg.grad_tol) break;
        }
    }
}

LapAtomDictionary init_lap_atoms(int m, int n, Rng& rng, double edge_p) {
    if (n < 1 || m < 2) throw std::invalid_argument("init_lap_atoms: need m >= 2, n >= 1");
    LapAtomDictionary D;
    D.m = m;
    D.atoms.resize(static_cast<Eigen::Index>(m) * m, n);
    for (int a = 0; a < n; ++a) {
        WeightedGraph g;
        do {
            g.node_count = m;
            g.edges.clear();
            for (int u = 0; u < m; ++u) {
                for (int v = u + 1; v < m; ++v) {
                    if (rng.bernoulli(edge_p)) g.edges.push_back({u, v, 1.0});
                }
            }
        } while (g.edges.empty());
        Eigen::MatrixXd L = laplacian(g);
        L *= static_cast<double>(m) / L.trace();
        D.atoms.col(a) = vec_rows(L);
    }
    return D;
}

LapDLModel am_train(const Eigen::MatrixXd& Y, const LapDLConfig& cfg, Rng& rng) {
    const auto msq = Y.rows();
    const auto m = static_cast<int>(std::llround(std::sqrt(static_cast<double>(msq))));
    if (static_cast<Eigen::Index>(m) * m != msq)
        throw std::invalid_argument("am_train: signals are not vectorized square matrices");
    if (cfg.sparsity > cfg.n_atoms) throw std::invalid_argument("am_train: sparsity exceeds atom count");

    LapDLModel model;
    model.dict = init_lap_atoms(m, cfg.n_atoms, rng, cfg.er_init_p);
    model.codes = Eigen::MatrixXd::Zero(cfg.n_atoms, Y.cols());

    double prev_round_obj = std::numeric_limits<double>::infinity();
    for (int round = 0; round < cfg.am_iters; ++round) {
        // Representation step: OMP against the column-normalized dictionary,
        // coefficients rescaled back to the unnormalized atoms.
        Eigen::MatrixXd normed = model.dict.atoms;
        Eigen::VectorXd norms(cfg.n_atoms);
        for (int j = 0; j < cfg.n_atoms; ++j) {
            norms(j) = normed.col(j).norm();
            if (norms(j) > 1e-12) {
                normed.col(j) /= norms(j);
            } else {
                normed.col(j).setZero();  // collapsed atom never gets selected
            }
        }
        const int s = std::min<int>(cfg.sparsity, static_cast<int>(std::min<Eigen::Index>(msq, cfg.n_atoms)));
        for (Eigen::Index c = 0; c < Y.cols(); ++c) {
            const Eigen::VectorXd y = Y.col(c);
            Eigen::VectorXd x = Eigen::VectorXd::Zero(cfg.n_atoms);
            if (y.norm() > 0.0) {
                const SparseCode code = omp(normed, y, s);
                for (std::size_t k = 0; k < code.support.size(); ++k) {
                    const int j = code.support[k];
                    if (norms(j) > 1e-12) x(j) = code.values[k] / norms(j);
                }
            }
            // monotone safeguard: never trade up the residual of the kept code
            if (round == 0 ||
                (y - model.dict.atoms * x).squaredNorm() <=
                    (y - model.dict.atoms * model.codes.col(c)).squaredNorm()) {
                model.codes.col(c) = x;
            }
        }
        model.objective_trace.push_back(f_rho(model.dict, model.codes, Y, cfg.rho));

        bcgd_dict_update(model.dict, model.codes, Y, cfg, rng);
        const double obj = f_rho(model.dict, model.codes, Y, cfg.rho);
        model.objective_trace.push_back(obj);

        if (std::isfinite(prev_round_obj) &&
            std::abs(prev_round_obj - obj) < 1e-5 * std::max(prev_round_obj, 1e-30))
            break;
        prev_round_obj = obj;
    }
    return model;
}

}  // namespace lapdict
