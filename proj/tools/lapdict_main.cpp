#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "lapdict/experiments.hpp"
#include "lapdict/io.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> scale;
    std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file")->required();
    cmd->add_option("--seed", flags.seed, "root seed override");
    cmd->add_option("--scale", flags.scale, "dataset scale override, (0, 1]");
    cmd->add_option("--out", flags.out_dir, "output directory override");
}

lapdict::ExperimentConfig effective_config(const CommonFlags& flags) {
    lapdict::ExperimentConfig cfg = lapdict::load_config(flags.config_path);
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.scale) cfg.scale = *flags.scale;
    if (flags.out_dir) cfg.out_dir = *flags.out_dir;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Laplacian-structured dictionary learning for graph classification"};
    app.require_subcommand(1);

    CommonFlags gen_flags, train_flags, classify_flags, bench_flags;
    std::string train_method, classify_method;
    std::vector<std::string> bench_methods;

    auto* gen = app.add_subcommand("gen", "generate datasets (train.lds / test.lds)");
    add_common(gen, gen_flags);

    auto* train = app.add_subcommand("train", "train per-class models from train.lds");
    add_common(train, train_flags);
    train->add_option("--method", train_method, "lapdl | sepdl | sbo | src")->required();

    auto* classify = app.add_subcommand("classify", "classify test.lds against saved models");
    add_common(classify, classify_flags);
    classify->add_option("--method", classify_method, "lapdl | sepdl | sbo | src")->required();

    auto* bench = app.add_subcommand("bench", "full experiment pipeline (gen + train + classify)");
    add_common(bench, bench_flags);
    bench->add_option("--method", bench_methods, "restrict to these methods");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the error and usage text
        return 2;
    }

    try {
        if (gen->parsed()) {
            lapdict::cmd_gen(effective_config(gen_flags));
        } else if (train->parsed()) {
            lapdict::cmd_train(effective_config(train_flags), train_method);
        } else if (classify->parsed()) {
            const auto report = lapdict::cmd_classify(effective_config(classify_flags), classify_method);
            std::cout << classify_method << ": accuracy " << lapdict::format_double(report.accuracy)
                      << '\n';
        } else if (bench->parsed()) {
            auto cfg = effective_config(bench_flags);
            if (!bench_methods.empty()) cfg.methods = bench_methods;
            lapdict::run_bench(cfg);
        }
    } catch (const lapdict::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
