// earnsignal: command-line driver for the sentiment-to-direction pipeline.
//
//   earnsignal --config run.json [--seed N] [--out DIR] [--threads N] ingest|featurize|train|evaluate
//   earnsignal predict --model model.json --table features.csv [--output preds.csv]
//
// Exit codes: 0 ok, 2 input/IO or config error, 3 data-contract error, 4 artifact error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "earnsignal/cli/commands.hpp"

namespace {

using namespace earnsignal;

cli::RunConfig load_config(const std::string& path, const std::optional<std::uint64_t>& seed,
                           const std::optional<std::string>& out) {
    if (path.empty()) throw Error(ErrorKind::BadConfig, "--config is required for this command");
    cli::RunConfig cfg = cli::load_run_config(path);
    if (seed) cli::set_seed(cfg, *seed);
    if (out) cfg.output_dir = *out;
    else cfg.output_dir = cfg.resolve(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + cfg.output_dir);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Earnings-sentiment stock direction pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::size_t threads = 1;
    app.add_option("--config", config_path, "Run configuration (JSON)");
    app.add_option("--seed", seed, "Override the configured seed");
    app.add_option("--out", out, "Override the output directory");
    app.add_option("--threads", threads, "Worker threads for tree split search (results do not depend on it)")
        ->check(CLI::Range(std::size_t{1}, std::size_t{256}));

    auto* ingest = app.add_subcommand("ingest", "Parse raw inputs into normalized stores");
    auto* featurize = app.add_subcommand("featurize", "Score sentiment and build the labeled feature table");
    auto* train = app.add_subcommand("train", "Fit the configured model and write the artifact");
    auto* evaluate = app.add_subcommand("evaluate", "Temporal split, fit every model, write reports");
    auto* predict = app.add_subcommand("predict", "Score a feature table with a saved model");
    std::string model_path;
    std::string table_path;
    std::string output_path;
    predict->add_option("--model", model_path, "Model artifact")->required();
    predict->add_option("--table", table_path, "Feature table CSV")->required();
    predict->add_option("--output", output_path, "Predictions CSV (default: <out>/predictions.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*predict) {
            if (output_path.empty()) {
                const std::string dir = out ? *out : ".";
                output_path = (std::filesystem::path(dir) / "predictions.csv").string();
            }
            const auto preds = cli::cmd_predict(model_path, table_path, output_path);
            std::cout << "wrote " << preds.size() << " predictions to " << output_path << "\n";
            return 0;
        }
        cli::RunConfig cfg = load_config(config_path, seed, out);
        if (*ingest) {
            const auto sum = cli::cmd_ingest(cfg, std::cerr);
            for (const auto& [store, n] : sum.rows) std::cout << store << ": " << n << " rows\n";
        } else if (*featurize) {
            const auto table = cli::cmd_featurize(cfg, std::cerr);
            std::cout << "features: " << table.size() << " rows x " << table.width() << " columns\n";
        } else if (*train) {
            const auto a = cli::cmd_train(cfg, threads, std::cerr);
            std::cout << "trained " << cli::artifact_kind(a.model) << " -> " << cfg.out_path("model.json") << "\n";
        } else if (*evaluate) {
            const auto rep = cli::cmd_evaluate(cfg, threads, std::cerr);
            for (const auto& r : rep.results) {
                std::cout << r.name << " accuracy " << r.metrics.accuracy << "\n";
            }
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
