#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lapdict/rng.hpp"
#include "lapdict/sparse.hpp"

namespace lapdict {

struct ClassifierReport {
    double accuracy = 0.0;
    std::vector<std::vector<std::uint64_t>> confusion;  // confusion[true][pred]
    std::vector<double> precision;                      // per class
    std::vector<double> recall;
    double runtime_seconds = 0.0;  // informative only; kept out of the
                                   // deterministic report files
    std::string config_echo;
};

struct BaselineTrainStats {
    std::vector<double> error_trace;  // ||Y - D X||_F^2 after each iteration
    int replaced_atoms = 0;
};

// Unstructured dictionary learning baseline: OMP coding alternating with
// sequential approximate-K-SVD atom updates; columns stay unit-norm.
Eigen::MatrixXd baseline_dl_train(const Eigen::MatrixXd& Y, int n_atoms, int s, int iters,
                                  Rng& rng, BaselineTrainStats* stats = nullptr);

// SRC-style decision: OMP-code every test signal against each class
// dictionary and pick the class of least squared reconstruction error
// (ties to the lowest class id). Optional `errors` is classes x signals.
std::vector<std::uint32_t> src_classify(const std::vector<Eigen::MatrixXd>& models,
                                        const Eigen::MatrixXd& Y_test, int s,
                                        Eigen::MatrixXd* errors = nullptr);

// Accuracy, confusion counts and per-class precision/recall.
ClassifierReport evaluate(const std::vector<std::uint32_t>& labels_true,
                          const std::vector<std::uint32_t>& labels_pred);

}  // namespace lapdict
