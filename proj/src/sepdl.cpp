#include "lapdict/sepdl.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lapdict {

namespace {

void flip_to_positive_peak(Eigen::VectorXd& v) {
    Eigen::Index peak = 0;
    v.cwiseAbs().maxCoeff(&peak);
    if (v(peak) < 0.0) v = -v;
}

// Draws a nonzero slice (column of a random signal, or row when
// `transposed`) as an initial atom; falls back to a Gaussian direction.
Eigen::VectorXd draw_init_atom(const Eigen::MatrixXd& Y, int m1, int m2, bool transposed, Rng& rng) {
    const Eigen::Index n_signals = Y.cols();
    for (int attempt = 0; attempt < 64; ++attempt) {
        const auto i = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n_signals)));
        const auto sig = Eigen::Map<const Eigen::MatrixXd>(Y.col(i).data(), m1, m2);
        Eigen::VectorXd atom = transposed
                                   ? Eigen::VectorXd(sig.row(static_cast<Eigen::Index>(
                                                                 rng.index(static_cast<std::size_t>(m1))))
                                                         .transpose())
                                   : Eigen::VectorXd(sig.col(static_cast<Eigen::Index>(
                                         rng.index(static_cast<std::size_t>(m2)))));
        const double norm = atom.norm();
        if (norm > 1e-12) {
            atom /= norm;
            flip_to_positive_peak(atom);
            return atom;
        }
    }
    Eigen::VectorXd atom(transposed ? m2 : m1);
    for (Eigen::Index i = 0; i < atom.size(); ++i) atom(i) = rng.normal();
    atom.normalize();
    flip_to_positive_peak(atom);
    return atom;
}

Eigen::VectorXd dominant_left_factor(const Eigen::MatrixXd& M) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
    Eigen::VectorXd u = svd.matrixU().col(0);
    flip_to_positive_peak(u);
    return u;
}

struct PairUse {
    int signal;
    int pos;  // position inside the signal's code
};

}  // namespace

SeparableDictPair pairwise_aksvd_train(const Eigen::MatrixXd& Y, int m1, int m2, int n1, int n2,
                                       int s, int iters, Rng& rng, SepTrainStats* stats) {
    if (Y.rows() != static_cast<Eigen::Index>(m1) * m2)
        throw std::invalid_argument("pairwise_aksvd_train: signal dimension mismatch");
    if (s > n1 * n2) throw std::invalid_argument("pairwise_aksvd_train: sparsity exceeds pair count");
    const auto n_signals = static_cast<int>(Y.cols());
    if (n_signals == 0) throw std::invalid_argument("pairwise_aksvd_train: empty signal set");

    SeparableDictPair pair;
    pair.d1.resize(m1, n1);
    pair.d2.resize(m2, n2);
    for (int j = 0; j < n1; ++j) pair.d1.col(j) = draw_init_atom(Y, m1, m2, false, rng);
    for (int j = 0; j < n2; ++j) pair.d2.col(j) = draw_init_atom(Y, m1, m2, true, rng);

    std::vector<SparseCode> codes(static_cast<std::size_t>(n_signals));
    std::vector<Eigen::MatrixXd> residual(static_cast<std::size_t>(n_signals));

    auto signal = [&](int i) {
        return Eigen::Map<const Eigen::MatrixXd>(Y.col(i).data(), m1, m2);
    };

    for (int iter = 0; iter < iters; ++iter) {
        // Sparse coding stage.
        for (int i = 0; i < n_signals; ++i) {
            codes[static_cast<std::size_t>(i)] = omp2d(pair.d1, pair.d2, signal(i), s);
            residual[static_cast<std::size_t>(i)] =
                signal(i) - reconstruct_pair(pair.d1, pair.d2, codes[static_cast<std::size_t>(i)]);
        }

        auto worst_signal = [&]() {
            int worst = 0;
            double worst_err = -1.0;
            for (int i = 0; i < n_signals; ++i) {
                const double err = residual[static_cast<std::size_t>(i)].squaredNorm();
                if (err > worst_err) {
                    worst_err = err;
                    worst = i;
                }
            }
            return worst;
        };

        // D1 sweep, D2 frozen.
        for (int j = 0; j < n1; ++j) {
            std::vector<PairUse> users;
            for (int i = 0; i < n_signals; ++i) {
                const auto& code = codes[static_cast<std::size_t>(i)];
                for (int k = 0; k < code.size(); ++k) {
                    if (code.support[static_cast<std::size_t>(k)] % n1 == j) users.push_back({i, k});
                }
            }
            if (users.empty()) {
                pair.d1.col(j) = dominant_left_factor(signal(worst_signal()));
                if (stats) ++stats->replaced_atoms;
                continue;
            }
            const Eigen::VectorXd d_old = pair.d1.col(j);
            // contraction u_i = D2 * (row j of X_i)^T accumulated per signal
            std::vector<Eigen::VectorXd> u(users.size());
            Eigen::VectorXd f = Eigen::VectorXd::Zero(m1);
            int prev_signal = -1;
            Eigen::VectorXd u_sig;
            for (std::size_t t = 0; t <= users.size(); ++t) {
                const int sig_i = (t < users.size()) ? users[t].signal : -2;
                if (sig_i != prev_signal) {
                    if (prev_signal >= 0) {
                        // E_i = R_i + d_old u_i^T, so E_i u_i = R_i u_i + d_old ||u_i||^2
                        f += residual[static_cast<std::size_t>(prev_signal)] * u_sig +
                             d_old * u_sig.squaredNorm();
                    }
                    if (t == users.size()) break;
                    u_sig = Eigen::VectorXd::Zero(m2);
                    prev_signal = sig_i;
                }
                const auto& code = codes[static_cast<std::size_t>(sig_i)];
                const int pos = users[t].pos;
                const int j2 = code.support[static_cast<std::size_t>(pos)] / n1;
                u_sig += code.values[static_cast<std::size_t>(pos)] * pair.d2.col(j2);
            }
            const double fnorm = f.norm();
            if (fnorm <= 1e-12) {
                pair.d1.col(j) = dominant_left_factor(signal(worst_signal()));
                if (stats) ++stats->replaced_atoms;
                continue;
            }
            Eigen::VectorXd d_new = f / fnorm;
            flip_to_positive_peak(d_new);
            pair.d1.col(j) = d_new;

            // coefficient refresh c <- d^T E_i D2_j2 and residual maintenance
            prev_signal = -1;
            Eigen::MatrixXd e_i;
            Eigen::VectorXd u_old, u_new;
            for (std::size_t t = 0; t < users.size(); ++t) {
                const int i = users[t].signal;
                auto& code = codes[static_cast<std::size_t>(i)];
                if (i != prev_signal) {
                    if (prev_signal >= 0)
                        residual[static_cast<std::size_t>(prev_signal)] = e_i - pair.d1.col(j) * u_new.transpose();
                    u_old = Eigen::VectorXd::Zero(m2);
                    for (std::size_t t2 = t; t2 < users.size() && users[t2].signal == i; ++t2) {
                        const auto& c2 = codes[static_cast<std::size_t>(i)];
                        const int p2 = users[t2].pos;
                        u_old += c2.values[static_cast<std::size_t>(p2)] *
                                 pair.d2.col(c2.support[static_cast<std::size_t>(p2)] / n1);
                    }
                    e_i = residual[static_cast<std::size_t>(i)] + d_old * u_old.transpose();
                    u_new = Eigen::VectorXd::Zero(m2);
                    prev_signal = i;
                }
                const int pos = users[t].pos;
                const int j2 = code.support[static_cast<std::size_t>(pos)] / n1;
                const double c = pair.d1.col(j).dot(e_i * pair.d2.col(j2));
                code.values[static_cast<std::size_t>(pos)] = c;
                u_new += c * pair.d2.col(j2);
            }
            if (prev_signal >= 0)
                residual[static_cast<std::size_t>(prev_signal)] = e_i - pair.d1.col(j) * u_new.transpose();
        }

        // D2 sweep, D1 frozen (mirrored through the transposed model).
        for (int j = 0; j < n2; ++j) {
            std::vector<PairUse> users;
            for (int i = 0; i < n_signals; ++i) {
                const auto& code = codes[static_cast<std::size_t>(i)];
                for (int k = 0; k < code.size(); ++k) {
                    if (code.support[static_cast<std::size_t>(k)] / n1 == j) users.push_back({i, k});
                }
            }
            if (users.empty()) {
                pair.d2.col(j) = dominant_left_factor(signal(worst_signal()).transpose());
                if (stats) ++stats->replaced_atoms;
                continue;
            }
            const Eigen::VectorXd d_old = pair.d2.col(j);
            Eigen::VectorXd f = Eigen::VectorXd::Zero(m2);
            int prev_signal = -1;
            Eigen::VectorXd u_sig;
            for (std::size_t t = 0; t <= users.size(); ++t) {
                const int sig_i = (t < users.size()) ? users[t].signal : -2;
                if (sig_i != prev_signal) {
                    if (prev_signal >= 0) {
                        f += residual[static_cast<std::size_t>(prev_signal)].transpose() * u_sig +
                             d_old * u_sig.squaredNorm();
                    }
                    if (t == users.size()) break;
                    u_sig = Eigen::VectorXd::Zero(m1);
                    prev_signal = sig_i;
                }
                const auto& code = codes[static_cast<std::size_t>(sig_i)];
                const int pos = users[t].pos;
                const int j1 = code.support[static_cast<std::size_t>(pos)] % n1;
                u_sig += code.values[static_cast<std::size_t>(pos)] * pair.d1.col(j1);
            }
            const double fnorm = f.norm();
            if (fnorm <= 1e-12) {
                pair.d2.col(j) = dominant_left_factor(signal(worst_signal()).transpose());
                if (stats) ++stats->replaced_atoms;
                continue;
            }
            Eigen::VectorXd d_new = f / fnorm;
            flip_to_positive_peak(d_new);
            pair.d2.col(j) = d_new;

            prev_signal = -1;
            Eigen::MatrixXd e_i;
            Eigen::VectorXd u_old, u_new;
            for (std::size_t t = 0; t < users.size(); ++t) {
                const int i = users[t].signal;
                auto& code = codes[static_cast<std::size_t>(i)];
                if (i != prev_signal) {
                    if (prev_signal >= 0)
                        residual[static_cast<std::size_t>(prev_signal)] = e_i - u_new * pair.d2.col(j).transpose();
                    u_old = Eigen::VectorXd::Zero(m1);
                    for (std::size_t t2 = t; t2 < users.size() && users[t2].signal == i; ++t2) {
                        const auto& c2 = codes[static_cast<std::size_t>(i)];
                        const int p2 = users[t2].pos;
                        u_old += c2.values[static_cast<std::size_t>(p2)] *
                                 pair.d1.col(c2.support[static_cast<std::size_t>(p2)] % n1);
                    }
                    e_i = residual[static_cast<std::size_t>(i)] + u_old * d_old.transpose();
                    u_new = Eigen::VectorXd::Zero(m1);
                    prev_signal = i;
                }
                const int pos = users[t].pos;
                const int j1 = code.support[static_cast<std::size_t>(pos)] % n1;
                const double c = pair.d1.col(j1).dot(e_i * pair.d2.col(j));
                code.values[static_cast<std::size_t>(pos)] = c;
                u_new += c * pair.d1.col(j1);
            }
            if (prev_signal >= 0)
                residual[static_cast<std::size_t>(prev_signal)] = e_i - u_new * pair.d2.col(j).transpose();
        }

        if (stats) {
            double err = 0.0;
            for (const auto& r : residual) err += r.squaredNorm();
            stats->rmse_trace.push_back(
                std::sqrt(err / (static_cast<double>(m1) * m2 * n_signals)));
        }
    }
    return pair;
}

double sep_rmse(const Eigen::MatrixXd& Y, int m1, int m2, const SeparableDictPair& pair,
                const std::vector<SparseCode>& codes) {
    if (Y.cols() != static_cast<Eigen::Index>(codes.size()))
        throw std::invalid_argument("sep_rmse: code count mismatch");
    double err = 0.0;
    for (Eigen::Index i = 0; i < Y.cols(); ++i) {
        const auto sig = Eigen::Map<const Eigen::MatrixXd>(Y.col(i).data(), m1, m2);
        err += (sig - reconstruct_pair(pair.d1, pair.d2, codes[static_cast<std::size_t>(i)])).squaredNorm();
    }
    return std::sqrt(err / (static_cast<double>(m1) * m2 * static_cast<double>(Y.cols())));
}

std::vector<std::uint32_t> sep_classify(const std::vector<SeparableDictPair>& models,
                                        const Eigen::MatrixXd& Y, int m1, int m2, int s,
                                        Eigen::MatrixXd* errors) {
    if (models.empty()) throw std::invalid_argument("sep_classify: no class models");
    const auto n_signals = Y.cols();
    Eigen::MatrixXd err(models.size(), n_signals);
    for (std::size_t c = 0; c < models.size(); ++c) {
        for (Eigen::Index i = 0; i < n_signals; ++i) {
            const auto sig = Eigen::Map<const Eigen::MatrixXd>(Y.col(i).data(), m1, m2);
            const SparseCode code = omp2d(models[c].d1, models[c].d2, sig, s);
            err(static_cast<Eigen::Index>(c), i) =
                (sig - reconstruct_pair(models[c].d1, models[c].d2, code)).squaredNorm();
        }
    }
    std::vector<std::uint32_t> labels(static_cast<std::size_t>(n_signals));
    for (Eigen::Index i = 0; i < n_signals; ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < err.rows(); ++c) {
            if (err(c, i) < err(best, i)) best = c;  // strict: ties keep the lowest class
        }
        labels[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(best);
    }
    if (errors) *errors = std::move(err);
    return labels;
}

}  // namespace lapdict
