// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include <cstdio>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rose/cli.hpp"
#include "rose/errors.hpp"

namespace {

using rose::cli::RunConfig;

/// Flags write `section.key = value` pairs so precedence is uniform:
/// defaults < config file < ROSE_SEED < explicit command-line flags.
struct FlagMap {
    std::map<std::string, std::string> values;
    std::string config_path;

    void add_common(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "line-oriented `section.key = value` file");
        option(cmd, "--corpus", "paths.corpus", "corpus TSV path");
        option(cmd, "--out-dir", "paths.out_dir", "artifact output directory");
        option(cmd, "--vocab", "paths.vocab", "vocabulary file path");
        option(cmd, "--checkpoint", "paths.checkpoint", "checkpoint path");
        option(cmd, "--seed", "train.seed", "seed for every stochastic step");
    }

    void add_training(CLI::App* cmd) {
        option(cmd, "--lr", "train.learning_rate", "AdamW learning rate");
        option(cmd, "--batch-size", "train.batch_size", "mini-batch size");
        option(cmd, "--epochs", "train.epochs", "max training epochs");
        option(cmd, "--weight-decay", "train.weight_decay", "decoupled weight decay");
        option(cmd, "--patience", "train.patience", "early-stop patience (epochs)");
        option(cmd, "--train-frac", "split.train", "train split fraction");
        option(cmd, "--val-frac", "split.val", "validation split fraction");
        option(cmd, "--test-frac", "split.test", "test split fraction");
        option(cmd, "--vocab-cap", "vocab.max_size", "vocabulary size cap");
        flag(cmd, "--balance", "corpus.balance", "undersample to the minority class first");
        add_model(cmd);
    }

    void add_model(CLI::App* cmd) {
        option(cmd, "--window-len", "window.window_len", "window length in tokens");
        option(cmd, "--stride", "window.stride", "window stride in tokens");
        option(cmd, "--d-model", "model.d_model", "embedding width");
        option(cmd, "--n-heads", "model.n_heads", "attention heads");
        option(cmd, "--n-layers", "model.n_layers", "encoder layers");
        option(cmd, "--d-ff", "model.d_ff", "feed-forward width");
        option(cmd, "--dropout", "model.dropout_rate", "train-mode dropout rate");
    }

    RunConfig resolve() {
        RunConfig cfg;
        if (!config_path.empty()) {
            rose::cli::apply_config(cfg, rose::cli::parse_config_file(config_path));
        }
        rose::cli::apply_env_seed(cfg);
        std::map<std::string, std::string> set;
        for (auto& [key, value] : values) {
            if (opts.at(key)->count() > 0) {
                set[key] = value;
            }
        }
        rose::cli::apply_config(cfg, set);
        return cfg;
    }

private:
    std::map<std::string, CLI::Option*> opts;

    void option(CLI::App* cmd, const char* name, const std::string& key, const char* help) {
        opts[key] = cmd->add_option(name, values[key], help);
    }

    void flag(CLI::App* cmd, const char* name, const std::string& key, const char* help) {
        values[key] = "true";
        opts[key] = cmd->add_flag(std::string(name))->description(help);
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rose: refactoring recommendation for architectural smells"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate a TSV corpus and write it normalized");
    std::string ingest_in, ingest_out;
    ingest->add_option("input", ingest_in, "corpus TSV")->required();
    ingest->add_option("--out", ingest_out, "normalized TSV output path");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic separable corpus");
    std::string synth_out = "synth.tsv";
    long per_class = 100;
    uint64_t synth_seed = 42;
    synth->add_option("--out", synth_out, "output TSV path");
    synth->add_option("--per-class", per_class, "samples per refactoring class");
    synth->add_option("--seed", synth_seed, "generator seed");

    // train
    auto* train = app.add_subcommand("train", "train a classifier on a TSV corpus");
    FlagMap train_flags;
    train_flags.add_common(train);
    train_flags.add_training(train);

    // search
    auto* search = app.add_subcommand("search", "random hyperparameter search");
    FlagMap search_flags;
    search_flags.add_common(search);
    search_flags.add_training(search);
    std::string budget;
    auto* budget_opt = search->add_option("--budget", budget, "configurations to evaluate");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a TSV corpus");
    FlagMap eval_flags;
    eval_flags.add_common(eval);
    eval_flags.add_model(eval);

    // kfold
    auto* kfold = app.add_subcommand("kfold", "k-fold cross-validated training");
    FlagMap kfold_flags;
    kfold_flags.add_common(kfold);
    kfold_flags.add_training(kfold);
    std::string k_value;
    auto* k_opt = kfold->add_option("--k", k_value, "number of folds");
    bool group_by_project = false;
    kfold->add_flag("--group-by-project", group_by_project,
                    "keep samples of one project in one fold");

    // predict
    auto* predict = app.add_subcommand("predict", "classify one code snippet file");
    FlagMap predict_flags;
    predict_flags.add_common(predict);
    predict_flags.add_model(predict);
    std::string code_path;
    std::string smell;
    predict->add_option("--code", code_path, "file holding the code snippet")->required();
    auto* smell_opt = predict->add_option("--smell", smell, "detected smell for cross-checking");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) {
            return rose::cli::run_ingest(ingest_in, ingest_out);
        }
        if (synth->parsed()) {
            if (const char* env = std::getenv("ROSE_SEED");
                env != nullptr && synth->count("--seed") == 0) {
                synth_seed = std::stoull(env);
            }
            return rose::cli::run_synth(synth_out, per_class, synth_seed);
        }
        if (train->parsed()) {
            return rose::cli::run_train(train_flags.resolve());
        }
        if (search->parsed()) {
            RunConfig cfg = search_flags.resolve();
            if (budget_opt->count() > 0) {
                cfg.search.budget = std::stoi(budget);
            }
            return rose::cli::run_search(cfg);
        }
        if (eval->parsed()) {
            return rose::cli::run_eval(eval_flags.resolve());
        }
        if (kfold->parsed()) {
            RunConfig cfg = kfold_flags.resolve();
            if (k_opt->count() > 0) {
                cfg.k_folds = std::stoi(k_value);
            }
            if (group_by_project) {
                cfg.group_by_project = true;
            }
            return rose::cli::run_kfold(cfg);
        }
        if (predict->parsed()) {
            RunConfig cfg = predict_flags.resolve();
            std::optional<std::string> smell_arg;
            if (smell_opt->count() > 0) {
                smell_arg = smell;
            }
            return rose::cli::run_predict(cfg, code_path, smell_arg);
        }
    } catch (const rose::InvalidConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return rose::cli::kExitInputError;
    } catch (const rose::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return rose::cli::kExitInputError;
    }
    return rose::cli::kExitInputError;
}
