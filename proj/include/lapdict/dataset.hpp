#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lapdict/graph.hpp"
#include "lapdict/rng.hpp"
#include "lapdict/sparse.hpp"

namespace lapdict {

enum class SignalLayout : std::uint8_t {
    VectorizedLaplacian,  // columns are vec_rows(L), length m*m
    Matrix2D,             // columns are column-stacked m1 x m2 matrices
    GraphSignal,          // columns are length-m signals living on graph nodes
};

struct LabeledDataset {
    Eigen::MatrixXd signals;           // one signal per column
    std::vector<std::uint32_t> labels; // class id per column, 0-based
    SignalLayout layout = SignalLayout::GraphSignal;
    int signal_rows = 0;  // matrix shape of one signal (rows x cols); cols == 1
    int signal_cols = 1;  // for the graph-signal layout

    Eigen::Index count() const { return signals.cols(); }
    std::uint32_t class_count() const;
};

// Columns of `ds` whose label equals `cls`.
Eigen::MatrixXd class_signals(const LabeledDataset& ds, std::uint32_t cls);

// Signals coupled to a graph: D = (lambda*I + L)^{-1} D0 with D0 Gaussian,
// columns normalized; each signal mixes s random atoms with Gaussian
// coefficients plus noise scaled to the requested per-signal SNR (dB).
// Pass an infinite snr_db for noiseless signals. Labels are all `label`.
// `dict_out` / `codes_out` expose the generating dictionary and the ground
// truth codes.
LabeledDataset gen_graph_signals(const LaplacianMatrix& L, double lambda, int n_atoms, int s,
                                 double snr_db, int count, std::uint32_t label, Rng& rng,
                                 Eigen::MatrixXd* dict_out = nullptr,
                                 std::vector<SparseCode>* codes_out = nullptr);

// Stratified split: per-class proportions preserved within rounding,
// disjoint and exhaustive. Throws if any class has fewer than 2 members.
std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& ds,
                                                        double train_fraction, Rng& rng);

// Concatenates datasets with identical layout and dimensions.
LabeledDataset concat_datasets(const LabeledDataset& a, const LabeledDataset& b);

}  // namespace lapdict
