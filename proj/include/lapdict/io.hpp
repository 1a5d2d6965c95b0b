#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "lapdict/classify.hpp"
#include "lapdict/dataset.hpp"

namespace lapdict {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "LDS1" dataset container: 4-byte magic, little-endian u64 {rows, cols,
// classes}, row-major f64 signal matrix, then u32 labels.
void save_dataset(const std::filesystem::path& path, const LabeledDataset& ds);
LabeledDataset load_dataset(const std::filesystem::path& path);

// CSV twin of the dataset: one signal per row, label as the last column.
void export_dataset_csv(const std::filesystem::path& path, const LabeledDataset& ds);

// "LDM1" dictionary blob: 4-byte magic, little-endian u64 {rows, cols},
// row-major f64 matrix.
void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd load_matrix(const std::filesystem::path& path);

void save_report_json(const std::filesystem::path& path, const ClassifierReport& report);
void save_report_csv(const std::filesystem::path& path, const ClassifierReport& report);

// Canonical float formatting shared by every text emitter so that repeated
// runs produce identical bytes.
std::string format_double(double v);

}  // namespace lapdict
