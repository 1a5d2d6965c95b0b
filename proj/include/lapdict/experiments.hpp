#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lapdict/classify.hpp"
#include "lapdict/dataset.hpp"
#include "lapdict/lapdl.hpp"
#include "lapdict/sbo.hpp"

namespace lapdict {

// Experiment configuration; defaults reproduce the reference benchmark
// settings. Values are overridable through a JSON config file and CLI flags.
struct ExperimentConfig {
    std::string experiment = "exp1";  // exp1: graph Laplacians, exp2: graph signals
    double scale = 1.0;               // fraction of the full dataset sizes
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";
    std::vector<std::string> methods;  // empty -> defaults per experiment
    double split_fraction = 0.8;
    bool export_csv = false;  // also emit datasets as CSV

    // topology of the normal class and the implanted anomaly
    int nodes = 50;
    int modules = 8;
    double p_intra = 0.8;
    double p_inter = 0.05;
    int anomaly_nodes = 10;
    int anomaly_degree = 4;
    double anomaly_rewire = 0.2;

    int exp1_normal = 5000;
    int exp1_anomaly = 500;

    LapDLConfig lapdl;

    int sep_atoms1 = 0;  // 0 -> 2 * m1
    int sep_atoms2 = 0;  // 0 -> 2 * m2
    int sep_sparsity = 30;
    int sep_iters = 10;

    int base_atoms = 0;  // 0 -> min(2 * dim, n_train_class / 2)
    int base_sparsity = 30;
    int base_iters = 10;

    // graph-coupled signal generation (exp2)
    double lambda = 5.0;
    int gen_atoms = 100;
    int sig_sparsity = 4;
    double snr_db = 20.0;
    int exp2_normal = 6000;
    int exp2_anomaly = 600;

    SboConfig sbo;
    std::vector<int> sweep_blocks = {6, 12, 24, 48};
    std::vector<double> sweep_nu = {0.1, 0.2, 0.3};
};

ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& cfg);

// Methods valid for the configured experiment, in canonical order.
std::vector<std::string> default_methods(const ExperimentConfig& cfg);
void validate_config(const ExperimentConfig& cfg);

// Stage subcommands; all artifacts land under cfg.out_dir.
// gen: train.lds/test.lds datasets (plus class Laplacian blobs for exp2).
void cmd_gen(const ExperimentConfig& cfg);
// train: per-class model blobs with JSON sidecars for one method.
void cmd_train(const ExperimentConfig& cfg, const std::string& method);
// classify: report_<method>.json/.csv from the saved models and test set.
ClassifierReport cmd_classify(const ExperimentConfig& cfg, const std::string& method);

struct MethodResult {
    std::string method;
    ClassifierReport report;
};

// Full benchmark pipelines (gen + train + classify per method; exp2 also
// emits the (block count, nu) sweep as sweep.csv).
std::vector<MethodResult> run_exp1(const ExperimentConfig& cfg);
std::vector<MethodResult> run_exp2(const ExperimentConfig& cfg);
std::vector<MethodResult> run_bench(const ExperimentConfig& cfg);

}  // namespace lapdict
