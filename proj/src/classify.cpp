#include "lapdict/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lapdict {

namespace {

void flip_to_positive_peak(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index peak = 0;
    v.cwiseAbs().maxCoeff(&peak);
    if (v(peak) < 0.0) v = -v;
}

}  // namespace

Eigen::MatrixXd baseline_dl_train(const Eigen::MatrixXd& Y, int n_atoms, int s, int iters,
                                  Rng& rng, BaselineTrainStats* stats) {
    const Eigen::Index m = Y.rows();
    const Eigen::Index n_signals = Y.cols();
    if (n_atoms < 1 || n_signals < 1) throw std::invalid_argument("baseline_dl_train: empty problem");
    if (s > std::min<Eigen::Index>(m, n_atoms))
        throw std::invalid_argument("baseline_dl_train: sparsity exceeds min(dim, atoms)");

    // Atoms start as distinct training signals (with replacement once the
    // dictionary outgrows the signal set).
    Eigen::MatrixXd dict(m, n_atoms);
    {
        std::vector<std::size_t> pool;
        for (int j = 0; j < n_atoms; ++j) {
            if (pool.empty())
                pool = rng.sample_indices(static_cast<std::size_t>(n_signals),
                                          static_cast<std::size_t>(n_signals));
            dict.col(j) = Y.col(static_cast<Eigen::Index>(pool.back()));
            pool.pop_back();
        }
        normalize_columns(dict, &rng);
        for (int j = 0; j < n_atoms; ++j) flip_to_positive_peak(dict.col(j));
    }

    Eigen::MatrixXd codes = Eigen::MatrixXd::Zero(n_atoms, n_signals);
    for (int iter = 0; iter < iters; ++iter) {
        for (Eigen::Index c = 0; c < n_signals; ++c) {
            const SparseCode code = omp(dict, Y.col(c), s);
            codes.col(c).setZero();
            for (std::size_t k = 0; k < code.support.size(); ++k)
                codes(code.support[k], c) = code.values[k];
        }
        Eigen::MatrixXd residual = Y - dict * codes;

        for (int j = 0; j < n_atoms; ++j) {
            std::vector<Eigen::Index> users;
            for (Eigen::Index c = 0; c < n_signals; ++c) {
                if (codes(j, c) != 0.0) users.push_back(c);
            }
            if (users.empty()) {
                Eigen::Index worst = 0;
                double worst_err = -1.0;
                for (Eigen::Index c = 0; c < n_signals; ++c) {
                    const double err = residual.col(c).squaredNorm();
                    if (err > worst_err) {
                        worst_err = err;
                        worst = c;
                    }
                }
                Eigen::VectorXd atom = Y.col(worst);
                if (atom.norm() <= 1e-12) continue;  // degenerate signal, keep old atom
                atom.normalize();
                flip_to_positive_peak(atom);
                dict.col(j) = atom;
                if (stats) ++stats->replaced_atoms;
                continue;
            }
            // rank-1 alternation on the residual with atom j excluded
            Eigen::MatrixXd f(m, static_cast<Eigen::Index>(users.size()));
            Eigen::VectorXd coef(static_cast<Eigen::Index>(users.size()));
            for (std::size_t t = 0; t < users.size(); ++t) {
                coef(static_cast<Eigen::Index>(t)) = codes(j, users[t]);
                f.col(static_cast<Eigen::Index>(t)) =
                    residual.col(users[t]) + dict.col(j) * coef(static_cast<Eigen::Index>(t));
            }
            Eigen::VectorXd atom = f * coef;
            const double norm = atom.norm();
            if (norm <= 1e-12) continue;
            atom /= norm;
            flip_to_positive_peak(atom);
            const Eigen::VectorXd new_coef = f.transpose() * atom;
            dict.col(j) = atom;
            for (std::size_t t = 0; t < users.size(); ++t) {
                codes(j, users[t]) = new_coef(static_cast<Eigen::Index>(t));
                residual.col(users[t]) =
                    f.col(static_cast<Eigen::Index>(t)) - atom * new_coef(static_cast<Eigen::Index>(t));
            }
        }
        if (stats) stats->error_trace.push_back(residual.squaredNorm());
    }
    return dict;
}

std::vector<std::uint32_t> src_classify(const std::vector<Eigen::MatrixXd>& models,
                                        const Eigen::MatrixXd& Y_test, int s,
                                        Eigen::MatrixXd* errors) {
    if (models.empty()) throw std::invalid_argument("src_classify: no class models");
    const auto n_signals = Y_test.cols();
    Eigen::MatrixXd err(static_cast<Eigen::Index>(models.size()), n_signals);
    for (std::size_t c = 0; c < models.size(); ++c) {
        const auto& dict = models[c];
        if (dict.rows() != Y_test.rows()) throw std::invalid_argument("src_classify: dimension mismatch");
        const int s_c = std::min<int>(s, static_cast<int>(std::min(dict.rows(), dict.cols())));
        for (Eigen::Index i = 0; i < n_signals; ++i) {
            const SparseCode code = omp(dict, Y_test.col(i), s_c);
            err(static_cast<Eigen::Index>(c), i) =
                (Y_test.col(i) - dict * code.dense()).squaredNorm();
        }
    }
    std::vector<std::uint32_t> labels(static_cast<std::size_t>(n_signals));
    for (Eigen::Index i = 0; i < n_signals; ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < err.rows(); ++c) {
            if (err(c, i) < err(best, i)) best = c;
        }
        labels[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(best);
    }
    if (errors) *errors = std::move(err);
    return labels;
}

ClassifierReport evaluate(const std::vector<std::uint32_t>& labels_true,
                          const std::vector<std::uint32_t>& labels_pred) {
    if (labels_true.size() != labels_pred.size())
        throw std::invalid_argument("evaluate: label count mismatch");
    std::uint32_t classes = 0;
    for (const auto l : labels_true) classes = std::max(classes, l + 1);
    for (const auto l : labels_pred) classes = std::max(classes, l + 1);

    ClassifierReport report;
    report.confusion.assign(classes, std::vector<std::uint64_t>(classes, 0));
    for (std::size_t i = 0; i < labels_true.size(); ++i)
        ++report.confusion[labels_true[i]][labels_pred[i]];

    std::uint64_t correct = 0;
    for (std::uint32_t c = 0; c < classes; ++c) correct += report.confusion[c][c];
    report.accuracy =
        labels_true.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(labels_true.size());

    report.precision.assign(classes, 0.0);
    report.recall.assign(classes, 0.0);
    for (std::uint32_t c = 0; c < classes; ++c) {
        std::uint64_t col_sum = 0, row_sum = 0;
        for (std::uint32_t t = 0; t < classes; ++t) {
            col_sum += report.confusion[t][c];
            row_sum += report.confusion[c][t];
        }
        report.precision[c] = col_sum ? static_cast<double>(report.confusion[c][c]) / static_cast<double>(col_sum) : 0.0;
        report.recall[c] = row_sum ? static_cast<double>(report.confusion[c][c]) / static_cast<double>(row_sum) : 0.0;
    }
    return report;
}

}  // namespace lapdict
