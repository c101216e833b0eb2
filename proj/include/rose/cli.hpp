// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#pragma once

#include <map>
#include <optional>
#include <string>

#include "rose/model.hpp"
#include "rose/trainer.hpp"
#include "rose/windowing.hpp"

namespace rose::cli {

// Stable exit codes for scripting.
constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitTrainError = 3;
constexpr int kExitModelError = 4;

/// Everything a command run needs; flags and the config file both write into
/// this. Numeric constraints are owned by the module configs inside.
struct RunConfig {
    std::string corpus_path;
    std::string vocab_path;
    std::string checkpoint_path;
    std::string out_dir = ".";

    WindowPlan plan;
    ModelConfig model;
    TrainConfig train;
    HPSearchSpace search;

    size_t vocab_cap = 8192;
    double f_train = 0.8;
    double f_val = 0.1;
    double f_test = 0.1;
    int k_folds = 10;
    bool balance = false;
    bool group_by_project = false;
};

/// Line-oriented config file: `section.key = value`, '#' comments. Unknown
/// keys are an error. Returns the parsed pairs.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Applies `section.key = value` pairs onto a RunConfig. Throws
/// InvalidConfigError on unknown keys or bad values.
void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv);

/// ROSE_SEED environment override (applied between config file and explicit
/// command-line flags).
void apply_env_seed(RunConfig& cfg);

int run_ingest(const std::string& tsv_path, const std::string& out_path);
int run_synth(const std::string& out_path, long per_class, uint64_t seed);
int run_train(const RunConfig& cfg);
int run_search(const RunConfig& cfg);
int run_eval(const RunConfig& cfg);
int run_kfold(const RunConfig& cfg);
int run_predict(const RunConfig& cfg, const std::string& code_path,
                const std::optional<std::string>& smell);

} // namespace rose::cli
