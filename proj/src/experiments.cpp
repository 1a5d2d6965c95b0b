#include "lapdict/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lapdict/graph.hpp"
#include "lapdict/io.hpp"
#include "lapdict/sepdl.hpp"

namespace lapdict {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

int scaled(int full, double scale) { return static_cast<int>(std::llround(full * scale)); }

template <typename T>
void maybe_get(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error: " + std::string(e.what()));
    }

    ExperimentConfig cfg;
    maybe_get(j, "experiment", cfg.experiment);
    maybe_get(j, "scale", cfg.scale);
    maybe_get(j, "seed", cfg.seed);
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    maybe_get(j, "methods", cfg.methods);
    maybe_get(j, "split_fraction", cfg.split_fraction);
    maybe_get(j, "export_csv", cfg.export_csv);

    if (j.contains("graph")) {
        const auto& g = j.at("graph");
        maybe_get(g, "nodes", cfg.nodes);
        maybe_get(g, "modules", cfg.modules);
        maybe_get(g, "p_intra", cfg.p_intra);
        maybe_get(g, "p_inter", cfg.p_inter);
        maybe_get(g, "anomaly_nodes", cfg.anomaly_nodes);
        maybe_get(g, "anomaly_degree", cfg.anomaly_degree);
        maybe_get(g, "anomaly_rewire", cfg.anomaly_rewire);
    }
    if (j.contains("exp1")) {
        const auto& e = j.at("exp1");
        maybe_get(e, "n_normal", cfg.exp1_normal);
        maybe_get(e, "n_anomaly", cfg.exp1_anomaly);
    }
    if (j.contains("lapdl")) {
        const auto& l = j.at("lapdl");
        maybe_get(l, "atoms", cfg.lapdl.n_atoms);
        maybe_get(l, "sparsity", cfg.lapdl.sparsity);
        maybe_get(l, "rho", cfg.lapdl.rho);
        maybe_get(l, "am_iters", cfg.lapdl.am_iters);
        maybe_get(l, "bcgd_iters", cfg.lapdl.bcgd_iters);
        maybe_get(l, "grad_tol", cfg.lapdl.grad_tol);
    }
    if (j.contains("sepdl")) {
        const auto& s = j.at("sepdl");
        maybe_get(s, "atoms1", cfg.sep_atoms1);
        maybe_get(s, "atoms2", cfg.sep_atoms2);
        maybe_get(s, "sparsity", cfg.sep_sparsity);
        maybe_get(s, "iters", cfg.sep_iters);
    }
    if (j.contains("baseline")) {
        const auto& b = j.at("baseline");
        maybe_get(b, "atoms", cfg.base_atoms);
        maybe_get(b, "sparsity", cfg.base_sparsity);
        maybe_get(b, "iters", cfg.base_iters);
    }
    if (j.contains("signals")) {
        const auto& s = j.at("signals");
        maybe_get(s, "lambda", cfg.lambda);
        maybe_get(s, "gen_atoms", cfg.gen_atoms);
        maybe_get(s, "sparsity", cfg.sig_sparsity);
        maybe_get(s, "snr_db", cfg.snr_db);
        maybe_get(s, "n_normal", cfg.exp2_normal);
        maybe_get(s, "n_anomaly", cfg.exp2_anomaly);
    }
    if (j.contains("sbo")) {
        const auto& s = j.at("sbo");
        maybe_get(s, "l_target", cfg.sbo.l_target);
        maybe_get(s, "sparsity", cfg.sbo.sparsity);
        maybe_get(s, "rounds", cfg.sbo.rounds);
        maybe_get(s, "nu", cfg.sbo.nu);
        maybe_get(s, "parallel_batch", cfg.sbo.parallel_batch);
        maybe_get(s, "sweep_blocks", cfg.sweep_blocks);
        maybe_get(s, "sweep_nu", cfg.sweep_nu);
    }
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["experiment"] = cfg.experiment;
    j["scale"] = cfg.scale;
    j["seed"] = cfg.seed;
    j["out_dir"] = cfg.out_dir.string();
    j["methods"] = cfg.methods.empty() ? default_methods(cfg) : cfg.methods;
    j["split_fraction"] = cfg.split_fraction;
    j["export_csv"] = cfg.export_csv;
    j["graph"] = {{"nodes", cfg.nodes},
                  {"modules", cfg.modules},
                  {"p_intra", cfg.p_intra},
                  {"p_inter", cfg.p_inter},
                  {"anomaly_nodes", cfg.anomaly_nodes},
                  {"anomaly_degree", cfg.anomaly_degree},
                  {"anomaly_rewire", cfg.anomaly_rewire}};
    j["exp1"] = {{"n_normal", cfg.exp1_normal}, {"n_anomaly", cfg.exp1_anomaly}};
    j["lapdl"] = {{"atoms", cfg.lapdl.n_atoms},
                  {"sparsity", cfg.lapdl.sparsity},
                  {"rho", cfg.lapdl.rho},
                  {"am_iters", cfg.lapdl.am_iters},
                  {"bcgd_iters", cfg.lapdl.bcgd_iters},
                  {"grad_tol", cfg.lapdl.grad_tol}};
    j["sepdl"] = {{"atoms1", cfg.sep_atoms1},
                  {"atoms2", cfg.sep_atoms2},
                  {"sparsity", cfg.sep_sparsity},
                  {"iters", cfg.sep_iters}};
    j["baseline"] = {{"atoms", cfg.base_atoms},
                     {"sparsity", cfg.base_sparsity},
                     {"iters", cfg.base_iters}};
    j["signals"] = {{"lambda", cfg.lambda},
                    {"gen_atoms", cfg.gen_atoms},
                    {"sparsity", cfg.sig_sparsity},
                    {"snr_db", cfg.snr_db},
                    {"n_normal", cfg.exp2_normal},
                    {"n_anomaly", cfg.exp2_anomaly}};
    j["sbo"] = {{"l_target", cfg.sbo.l_target},
                {"sparsity", cfg.sbo.sparsity},
                {"rounds", cfg.sbo.rounds},
                {"nu", cfg.sbo.nu},
                {"parallel_batch", cfg.sbo.parallel_batch},
                {"sweep_blocks", cfg.sweep_blocks},
                {"sweep_nu", cfg.sweep_nu}};
    return j.dump();
}

std::vector<std::string> default_methods(const ExperimentConfig& cfg) {
    if (cfg.experiment == "exp2") return {"sbo", "src"};
    return {"lapdl", "sepdl", "src"};
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.experiment != "exp1" && cfg.experiment != "exp2")
        throw std::invalid_argument("config: experiment must be exp1 or exp2");
    if (cfg.scale <= 0.0 || cfg.scale > 1.0)
        throw std::invalid_argument("config: scale must lie in (0, 1]");
    if (cfg.split_fraction <= 0.0 || cfg.split_fraction >= 1.0)
        throw std::invalid_argument("config: split_fraction must lie in (0, 1)");
    const bool exp1 = cfg.experiment == "exp1";
    const int n_normal = scaled(exp1 ? cfg.exp1_normal : cfg.exp2_normal, cfg.scale);
    const int n_anomaly = scaled(exp1 ? cfg.exp1_anomaly : cfg.exp2_anomaly, cfg.scale);
    if (n_normal < 2 || n_anomaly < 2)
        throw std::invalid_argument("config: scaled class sizes leave fewer than 2 signals per class");
    const auto valid = default_methods(cfg);
    for (const auto& m : cfg.methods) {
        if (std::find(valid.begin(), valid.end(), m) == valid.end())
            throw std::invalid_argument("config: method '" + m + "' not available for " + cfg.experiment);
    }
}

namespace {

// ----- dataset construction ------------------------------------------------

LabeledDataset build_exp1_dataset(const ExperimentConfig& cfg) {
    const int n_normal = scaled(cfg.exp1_normal, cfg.scale);
    const int n_anomaly = scaled(cfg.exp1_anomaly, cfg.scale);
    const auto dim = static_cast<Eigen::Index>(cfg.nodes) * cfg.nodes;

    LabeledDataset ds;
    ds.layout = SignalLayout::VectorizedLaplacian;
    ds.signal_rows = cfg.nodes;
    ds.signal_cols = cfg.nodes;
    ds.signals.resize(dim, n_normal + n_anomaly);
    ds.labels.resize(static_cast<std::size_t>(n_normal + n_anomaly));

    Rng rng_normal = substream(cfg.seed, "exp1/graphs/normal");
    Rng rng_anomaly = substream(cfg.seed, "exp1/graphs/anomaly");
    Rng rng_weights = substream(cfg.seed, "exp1/weights");

    for (int i = 0; i < n_normal; ++i) {
        WeightedGraph g = gen_sbm(cfg.nodes, cfg.modules, cfg.p_intra, cfg.p_inter, rng_normal);
        g = assign_weights(g, rng_weights);
        ds.signals.col(i) = vec_rows(laplacian(g));
        ds.labels[static_cast<std::size_t>(i)] = 0;
    }
    for (int i = 0; i < n_anomaly; ++i) {
        WeightedGraph host = gen_sbm(cfg.nodes, cfg.modules, cfg.p_intra, cfg.p_inter, rng_anomaly);
        WeightedGraph ws =
            gen_watts_strogatz(cfg.anomaly_nodes, cfg.anomaly_degree, cfg.anomaly_rewire, rng_anomaly);
        WeightedGraph g = implant_anomaly(host, ws, rng_anomaly);
        g = assign_weights(g, rng_weights);
        ds.signals.col(n_normal + i) = vec_rows(laplacian(g));
        ds.labels[static_cast<std::size_t>(n_normal + i)] = 1;
    }
    return ds;
}

// Class-defining topologies of exp2: one normal SBM Laplacian and one
// anomaly-implanted Laplacian, weighted like exp1.
std::vector<LaplacianMatrix> build_exp2_laplacians(const ExperimentConfig& cfg) {
    Rng rng = substream(cfg.seed, "exp2/topologies");
    WeightedGraph normal = gen_sbm(cfg.nodes, cfg.modules, cfg.p_intra, cfg.p_inter, rng);
    normal = assign_weights(normal, rng);

    WeightedGraph host = gen_sbm(cfg.nodes, cfg.modules, cfg.p_intra, cfg.p_inter, rng);
    WeightedGraph ws =
        gen_watts_strogatz(cfg.anomaly_nodes, cfg.anomaly_degree, cfg.anomaly_rewire, rng);
    WeightedGraph anomaly = implant_anomaly(host, ws, rng);
    anomaly = assign_weights(anomaly, rng);

    return {laplacian(normal), laplacian(anomaly)};
}

LabeledDataset build_exp2_dataset(const ExperimentConfig& cfg,
                                  const std::vector<LaplacianMatrix>& laplacians) {
    const int n_normal = scaled(cfg.exp2_normal, cfg.scale);
    const int n_anomaly = scaled(cfg.exp2_anomaly, cfg.scale);
    Rng rng0 = substream(cfg.seed, "exp2/signals/class0");
    Rng rng1 = substream(cfg.seed, "exp2/signals/class1");
    const LabeledDataset normal = gen_graph_signals(laplacians[0], cfg.lambda, cfg.gen_atoms,
                                                    cfg.sig_sparsity, cfg.snr_db, n_normal, 0, rng0);
    const LabeledDataset anomaly = gen_graph_signals(laplacians[1], cfg.lambda, cfg.gen_atoms,
                                                     cfg.sig_sparsity, cfg.snr_db, n_anomaly, 1, rng1);
    return concat_datasets(normal, anomaly);
}

// ----- model containers -----------------------------------------------------

int auto_base_atoms(const ExperimentConfig& cfg, Eigen::Index dim, Eigen::Index n_train) {
    if (cfg.base_atoms > 0) return cfg.base_atoms;
    const auto cap = std::max<Eigen::Index>(1, n_train / 2);
    return static_cast<int>(std::min<Eigen::Index>(2 * dim, cap));
}

std::filesystem::path models_dir(const ExperimentConfig& cfg) { return cfg.out_dir / "models"; }

void write_sidecar(const std::filesystem::path& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
}

// ----- per-method training --------------------------------------------------

void train_lapdl(const ExperimentConfig& cfg, const LabeledDataset& train) {
    for (std::uint32_t c = 0; c < train.class_count(); ++c) {
        const Eigen::MatrixXd y = class_signals(train, c);
        LapDLConfig lcfg = cfg.lapdl;
        lcfg.sparsity = std::min<int>(lcfg.sparsity, lcfg.n_atoms);
        Rng rng = substream(cfg.seed, "train/lapdl/class" + std::to_string(c));
        const LapDLModel model = am_train(y, lcfg, rng);
        save_matrix(models_dir(cfg) / ("lapdl_class" + std::to_string(c) + ".ldm"), model.dict.atoms);
    }
    write_sidecar(models_dir(cfg) / "lapdl.json",
                  {{"m", cfg.nodes},
                   {"atoms", cfg.lapdl.n_atoms},
                   {"sparsity", cfg.lapdl.sparsity},
                   {"rho", cfg.lapdl.rho},
                   {"classes", 2},
                   {"seed", cfg.seed}});
}

void train_sepdl(const ExperimentConfig& cfg, const LabeledDataset& train) {
    const int m1 = train.signal_rows, m2 = train.signal_cols;
    const int n1 = cfg.sep_atoms1 > 0 ? cfg.sep_atoms1 : 2 * m1;
    const int n2 = cfg.sep_atoms2 > 0 ? cfg.sep_atoms2 : 2 * m2;
    for (std::uint32_t c = 0; c < train.class_count(); ++c) {
        const Eigen::MatrixXd y = class_signals(train, c);
        Rng rng = substream(cfg.seed, "train/sepdl/class" + std::to_string(c));
        const SeparableDictPair pair =
            pairwise_aksvd_train(y, m1, m2, n1, n2, cfg.sep_sparsity, cfg.sep_iters, rng);
        save_matrix(models_dir(cfg) / ("sepdl_class" + std::to_string(c) + "_d1.ldm"), pair.d1);
        save_matrix(models_dir(cfg) / ("sepdl_class" + std::to_string(c) + "_d2.ldm"), pair.d2);
        write_sidecar(models_dir(cfg) / ("sepdl_class" + std::to_string(c) + ".json"),
                      {{"m1", m1}, {"n1", n1}, {"m2", m2}, {"n2", n2},
                       {"s", cfg.sep_sparsity}, {"seed", cfg.seed}});
    }
}

void train_src(const ExperimentConfig& cfg, const LabeledDataset& train) {
    for (std::uint32_t c = 0; c < train.class_count(); ++c) {
        const Eigen::MatrixXd y = class_signals(train, c);
        const int atoms = auto_base_atoms(cfg, y.rows(), y.cols());
        const int s = std::min<int>(cfg.base_sparsity, std::min<int>(static_cast<int>(y.rows()), atoms));
        Rng rng = substream(cfg.seed, "train/src/class" + std::to_string(c));
        const Eigen::MatrixXd dict = baseline_dl_train(y, atoms, s, cfg.base_iters, rng);
        save_matrix(models_dir(cfg) / ("src_class" + std::to_string(c) + ".ldm"), dict);
        write_sidecar(models_dir(cfg) / ("src_class" + std::to_string(c) + ".json"),
                      {{"dim", train.signals.rows()}, {"atoms", atoms},
                       {"s", s}, {"iters", cfg.base_iters}, {"seed", cfg.seed}});
    }
}

void train_sbo(const ExperimentConfig& cfg, const LabeledDataset& train, const SboConfig& scfg,
               const std::string& tag) {
    for (std::uint32_t c = 0; c < train.class_count(); ++c) {
        const Eigen::MatrixXd y = class_signals(train, c);
        const LaplacianMatrix l =
            load_matrix(cfg.out_dir / ("class_laplacian_" + std::to_string(c) + ".ldm"));
        const std::vector<Eigen::MatrixXd> init = {orthogonalize_laplacian(l)};
        Rng rng = substream(cfg.seed, "train/sbo" + tag + "/class" + std::to_string(c));
        const BlockUnion u = sbo_train(y, scfg, init, rng);
        for (int b = 0; b < u.block_count(); ++b) {
            save_matrix(models_dir(cfg) / ("sbo" + tag + "_class" + std::to_string(c) + "_block" +
                                           std::to_string(b) + ".ldm"),
                        u.blocks[static_cast<std::size_t>(b)]);
        }
        std::vector<int> class_of(static_cast<std::size_t>(u.block_count()), static_cast<int>(c));
        write_sidecar(models_dir(cfg) / ("sbo" + tag + "_class" + std::to_string(c) + ".json"),
                      {{"m", u.m}, {"blocks", u.block_count()}, {"class_of_block", class_of},
                       {"s", scfg.sparsity}, {"seed", cfg.seed}});
    }
}

// ----- per-method classification ---------------------------------------------

std::vector<std::uint32_t> classify_lapdl(const ExperimentConfig& cfg, const LabeledDataset& test) {
    std::vector<Eigen::MatrixXd> dicts;
    for (std::uint32_t c = 0; c < 2; ++c) {
        Eigen::MatrixXd atoms =
            load_matrix(models_dir(cfg) / ("lapdl_class" + std::to_string(c) + ".ldm"));
        // classification error depends only on atom spans: normalize columns
        // for the OMP contract and drop collapsed atoms
        std::vector<Eigen::Index> keep;
        for (Eigen::Index j = 0; j < atoms.cols(); ++j) {
            if (atoms.col(j).norm() > 1e-12) keep.push_back(j);
        }
        Eigen::MatrixXd dict(atoms.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k)
            dict.col(static_cast<Eigen::Index>(k)) = atoms.col(keep[k]).normalized();
        dicts.push_back(std::move(dict));
    }
    const int s = std::min<int>(cfg.lapdl.sparsity, cfg.lapdl.n_atoms);
    return src_classify(dicts, test.signals, s);
}

std::vector<std::uint32_t> classify_sepdl(const ExperimentConfig& cfg, const LabeledDataset& test) {
    std::vector<SeparableDictPair> pairs;
    for (std::uint32_t c = 0; c < 2; ++c) {
        SeparableDictPair p;
        p.d1 = load_matrix(models_dir(cfg) / ("sepdl_class" + std::to_string(c) + "_d1.ldm"));
        p.d2 = load_matrix(models_dir(cfg) / ("sepdl_class" + std::to_string(c) + "_d2.ldm"));
        pairs.push_back(std::move(p));
    }
    return sep_classify(pairs, test.signals, test.signal_rows, test.signal_cols, cfg.sep_sparsity);
}

std::vector<std::uint32_t> classify_src(const ExperimentConfig& cfg, const LabeledDataset& test) {
    std::vector<Eigen::MatrixXd> dicts;
    for (std::uint32_t c = 0; c < 2; ++c)
        dicts.push_back(load_matrix(models_dir(cfg) / ("src_class" + std::to_string(c) + ".ldm")));
    return src_classify(dicts, test.signals, cfg.base_sparsity);
}

std::vector<BlockUnion> load_sbo_models(const ExperimentConfig& cfg, const std::string& tag) {
    std::vector<BlockUnion> models;
    for (std::uint32_t c = 0; c < 2; ++c) {
        const auto sidecar_path =
            models_dir(cfg) / ("sbo" + tag + "_class" + std::to_string(c) + ".json");
        std::ifstream in(sidecar_path);
        if (!in) throw IoError("cannot open for reading: " + sidecar_path.string());
        json j;
        in >> j;
        BlockUnion u;
        u.m = j.at("m").get<int>();
        const int blocks = j.at("blocks").get<int>();
        for (int b = 0; b < blocks; ++b) {
            u.blocks.push_back(load_matrix(models_dir(cfg) / ("sbo" + tag + "_class" +
                                                              std::to_string(c) + "_block" +
                                                              std::to_string(b) + ".ldm")));
            u.class_of_block.push_back(static_cast<int>(c));
        }
        models.push_back(std::move(u));
    }
    return models;
}

std::vector<std::uint32_t> classify_sbo(const ExperimentConfig& cfg, const LabeledDataset& test,
                                        const std::string& tag) {
    const auto models = load_sbo_models(cfg, tag);
    std::vector<std::uint32_t> labels(static_cast<std::size_t>(test.count()));
    for (Eigen::Index i = 0; i < test.count(); ++i)
        labels[static_cast<std::size_t>(i)] = sbo_classify(models, test.signals.col(i), cfg.sbo.sparsity);
    return labels;
}

}  // namespace

void cmd_gen(const ExperimentConfig& cfg) {
    validate_config(cfg);
    std::filesystem::create_directories(cfg.out_dir);

    LabeledDataset ds;
    if (cfg.experiment == "exp1") {
        ds = build_exp1_dataset(cfg);
    } else {
        const auto laplacians = build_exp2_laplacians(cfg);
        for (std::size_t c = 0; c < laplacians.size(); ++c)
            save_matrix(cfg.out_dir / ("class_laplacian_" + std::to_string(c) + ".ldm"), laplacians[c]);
        ds = build_exp2_dataset(cfg, laplacians);
    }
    Rng rng_split = substream(cfg.seed, cfg.experiment + "/split");
    auto [train, test] = split_dataset(ds, cfg.split_fraction, rng_split);
    save_dataset(cfg.out_dir / "train.lds", train);
    save_dataset(cfg.out_dir / "test.lds", test);
    if (cfg.export_csv) {
        export_dataset_csv(cfg.out_dir / "train.csv", train);
        export_dataset_csv(cfg.out_dir / "test.csv", test);
    }
}

void cmd_train(const ExperimentConfig& cfg, const std::string& method) {
    validate_config(cfg);
    const auto valid = default_methods(cfg);
    if (std::find(valid.begin(), valid.end(), method) == valid.end())
        throw std::invalid_argument("method '" + method + "' not available for " + cfg.experiment);
    std::filesystem::create_directories(models_dir(cfg));
    const LabeledDataset train = load_dataset(cfg.out_dir / "train.lds");

    if (method == "lapdl") {
        train_lapdl(cfg, train);
    } else if (method == "sepdl") {
        train_sepdl(cfg, train);
    } else if (method == "src") {
        train_src(cfg, train);
    } else if (method == "sbo") {
        train_sbo(cfg, train, cfg.sbo, "");
    }
}

ClassifierReport cmd_classify(const ExperimentConfig& cfg, const std::string& method) {
    validate_config(cfg);
    const LabeledDataset test = load_dataset(cfg.out_dir / "test.lds");

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::uint32_t> labels;
    if (method == "lapdl") {
        labels = classify_lapdl(cfg, test);
    } else if (method == "sepdl") {
        labels = classify_sepdl(cfg, test);
    } else if (method == "src") {
        labels = classify_src(cfg, test);
    } else if (method == "sbo") {
        labels = classify_sbo(cfg, test, "");
    } else {
        throw std::invalid_argument("unknown method: " + method);
    }
    ClassifierReport report = evaluate(test.labels, labels);
    report.runtime_seconds = elapsed_since(t0);
    report.config_echo = config_to_json(cfg);
    save_report_json(cfg.out_dir / ("report_" + method + ".json"), report);
    save_report_csv(cfg.out_dir / ("report_" + method + ".csv"), report);
    return report;
}

namespace {

std::vector<MethodResult> run_methods(const ExperimentConfig& cfg) {
    const auto methods = cfg.methods.empty() ? default_methods(cfg) : cfg.methods;
    std::vector<MethodResult> results;
    for (const auto& method : methods) {
        const auto t0 = std::chrono::steady_clock::now();
        cmd_train(cfg, method);
        ClassifierReport report = cmd_classify(cfg, method);
        report.runtime_seconds = elapsed_since(t0);
        std::cout << cfg.experiment << ' ' << method << ": accuracy "
                  << format_double(report.accuracy) << " (" << format_double(report.runtime_seconds)
                  << " s)\n";
        results.push_back({method, std::move(report)});
    }
    return results;
}

}  // namespace

std::vector<MethodResult> run_exp1(const ExperimentConfig& cfg) {
    validate_config(cfg);
    cmd_gen(cfg);
    return run_methods(cfg);
}

std::vector<MethodResult> run_exp2(const ExperimentConfig& cfg) {
    validate_config(cfg);
    cmd_gen(cfg);
    auto results = run_methods(cfg);

    // (block count, nu) sweep; accuracy per grid cell, deterministic per seed
    const LabeledDataset train = load_dataset(cfg.out_dir / "train.lds");
    const LabeledDataset test = load_dataset(cfg.out_dir / "test.lds");
    std::ofstream sweep(cfg.out_dir / "sweep.csv");
    if (!sweep) throw IoError("cannot open for writing: " + (cfg.out_dir / "sweep.csv").string());
    sweep << "l_target,nu,accuracy\n";
    for (const int l_target : cfg.sweep_blocks) {
        for (const double nu : cfg.sweep_nu) {
            SboConfig scfg = cfg.sbo;
            scfg.l_target = l_target;
            scfg.nu = nu;
            const std::string tag =
                "_L" + std::to_string(l_target) + "_nu" + format_double(nu);
            ExperimentConfig sweep_cfg = cfg;
            sweep_cfg.sbo = scfg;
            train_sbo(sweep_cfg, train, scfg, tag);
            const auto models = load_sbo_models(sweep_cfg, tag);
            std::vector<std::uint32_t> labels(static_cast<std::size_t>(test.count()));
            for (Eigen::Index i = 0; i < test.count(); ++i)
                labels[static_cast<std::size_t>(i)] =
                    sbo_classify(models, test.signals.col(i), scfg.sparsity);
            const ClassifierReport report = evaluate(test.labels, labels);
            sweep << l_target << ',' << format_double(nu) << ','
                  << format_double(report.accuracy) << '\n';
        }
    }
    return results;
}

std::vector<MethodResult> run_bench(const ExperimentConfig& cfg) {
    return cfg.experiment == "exp2" ? run_exp2(cfg) : run_exp1(cfg);
}

}  // namespace lapdict
