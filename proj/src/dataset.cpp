#include "lapdict/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lapdict/sparse.hpp"

namespace lapdict {

std::uint32_t LabeledDataset::class_count() const {
    std::uint32_t c = 0;
    for (const auto l : labels) c = std::max(c, l + 1);
    return c;
}

Eigen::MatrixXd class_signals(const LabeledDataset& ds, std::uint32_t cls) {
    Eigen::Index n = 0;
    for (const auto l : ds.labels) n += (l == cls);
    Eigen::MatrixXd out(ds.signals.rows(), n);
    Eigen::Index j = 0;
    for (Eigen::Index i = 0; i < ds.count(); ++i) {
        if (ds.labels[static_cast<std::size_t>(i)] == cls) out.col(j++) = ds.signals.col(i);
    }
    return out;
}

LabeledDataset gen_graph_signals(const LaplacianMatrix& L, double lambda, int n_atoms, int s,
                                 double snr_db, int count, std::uint32_t label, Rng& rng,
                                 Eigen::MatrixXd* dict_out, std::vector<SparseCode>* codes_out) {
    if (lambda <= 0.0) throw std::invalid_argument("gen_graph_signals: lambda must be positive");
    if (s > n_atoms) throw std::invalid_argument("gen_graph_signals: sparsity exceeds atom count");
    const Eigen::Index m = L.rows();

    Eigen::MatrixXd d0(m, n_atoms);
    for (Eigen::Index j = 0; j < n_atoms; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) d0(i, j) = rng.normal();
    }

    Eigen::MatrixXd smoother = lambda * Eigen::MatrixXd::Identity(m, m) + L;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(smoother);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("gen_graph_signals: singular smoothing operator");
    Eigen::MatrixXd dict = ldlt.solve(d0);
    normalize_columns(dict);

    LabeledDataset ds;
    ds.layout = SignalLayout::GraphSignal;
    ds.signal_rows = static_cast<int>(m);
    ds.signal_cols = 1;
    ds.signals.resize(m, count);
    ds.labels.assign(static_cast<std::size_t>(count), label);
    if (codes_out) codes_out->clear();

    const bool noiseless = std::isinf(snr_db);
    for (int c = 0; c < count; ++c) {
        auto support = rng.sample_indices(static_cast<std::size_t>(n_atoms), static_cast<std::size_t>(s));
        std::sort(support.begin(), support.end());
        SparseCode code;
        code.ambient_dim = n_atoms;
        Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
        for (const auto a : support) {
            const double coef = rng.normal();
            y += coef * dict.col(static_cast<Eigen::Index>(a));
            code.support.push_back(static_cast<int>(a));
            code.values.push_back(coef);
        }
        if (!noiseless) {
            Eigen::VectorXd g(m);
            for (Eigen::Index i = 0; i < m; ++i) g(i) = rng.normal();
            const double gnorm = g.norm();
            if (gnorm > 0.0 && y.norm() > 0.0) {
                // ||noise|| chosen so 10*log10(||clean||^2 / ||noise||^2) == snr_db
                y += g * (y.norm() * std::pow(10.0, -snr_db / 20.0) / gnorm);
            }
        }
        ds.signals.col(c) = y;
        if (codes_out) codes_out->push_back(std::move(code));
    }
    if (dict_out) *dict_out = std::move(dict);
    return ds;
}

std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& ds,
                                                        double train_fraction, Rng& rng) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw std::invalid_argument("split_dataset: fraction must lie in (0, 1)");
    const std::uint32_t classes = ds.class_count();

    std::vector<std::vector<Eigen::Index>> by_class(classes);
    for (Eigen::Index i = 0; i < ds.count(); ++i)
        by_class[ds.labels[static_cast<std::size_t>(i)]].push_back(i);

    std::vector<Eigen::Index> train_idx, test_idx;
    for (auto& members : by_class) {
        if (members.size() < 2) throw std::invalid_argument("split_dataset: class with fewer than 2 members");
        std::vector<std::size_t> order = rng.sample_indices(members.size(), members.size());
        const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(members.size())));
        for (std::size_t i = 0; i < members.size(); ++i) {
            (i < n_train ? train_idx : test_idx).push_back(members[order[i]]);
        }
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    auto take = [&](const std::vector<Eigen::Index>& idx) {
        LabeledDataset out;
        out.layout = ds.layout;
        out.signal_rows = ds.signal_rows;
        out.signal_cols = ds.signal_cols;
        out.signals.resize(ds.signals.rows(), static_cast<Eigen::Index>(idx.size()));
        out.labels.resize(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            out.signals.col(static_cast<Eigen::Index>(i)) = ds.signals.col(idx[i]);
            out.labels[i] = ds.labels[static_cast<std::size_t>(idx[i])];
        }
        return out;
    };
    return {take(train_idx), take(test_idx)};
}

LabeledDataset concat_datasets(const LabeledDataset& a, const LabeledDataset& b) {
    if (a.layout != b.layout || a.signals.rows() != b.signals.rows() ||
        a.signal_rows != b.signal_rows || a.signal_cols != b.signal_cols)
        throw std::invalid_argument("concat_datasets: incompatible datasets");
    LabeledDataset out;
    out.layout = a.layout;
    out.signal_rows = a.signal_rows;
    out.signal_cols = a.signal_cols;
    out.signals.resize(a.signals.rows(), a.count() + b.count());
    out.signals << a.signals, b.signals;
    out.labels = a.labels;
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    return out;
}

}  // namespace lapdict
