// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "rose/checkpoint.hpp"
#include "rose/corpus.hpp"
#include "rose/metrics.hpp"
#include "rose/model.hpp"

namespace rose {

struct TrainConfig {
    double learning_rate = 5e-5;
    int batch_size = 16;
    int epochs = 10;
    double weight_decay = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int early_stop_patience = 3;
    uint64_t seed = 42;

    void validate() const; // throws InvalidConfigError
};

/// Random-search grid. The product is 5 x 3 x 3 = 45 combinations.
struct HPSearchSpace {
    std::vector<double> lr_grid = {1e-5, 2e-5, 5e-5, 7e-5, 8e-5};
    std::vector<int> batch_grid = {8, 16, 32};
    std::vector<double> wd_grid = {0.0, 0.01, 0.1};
    int budget = 40;
};

struct EpochRecord {
    int epoch = 0; // 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;
    double accuracy = 0.0;
    double precision = 0.0; // macro
    double recall = 0.0;    // macro
    double f1 = 0.0;        // macro
};

struct TrainResult {
    Parameters best_params;
    OptimizerState best_optimizer;
    int best_epoch = 0;
    std::vector<EpochRecord> history;
    TrainConfig train_config;
    ModelConfig model_config;
};

/// A sample pre-encoded into windows; built once, reused every epoch.
struct EncodedSample {
    std::vector<Window> windows;
    RefactoringLabel label = RefactoringLabel::ExtractMethod;
};

std::vector<EncodedSample> encode_corpus(const Corpus& corpus, const Vocab& vocab,
                                         const WindowPlan& plan);

/// -log softmax(logits)[label], computed via log-sum-exp.
double cross_entropy(const Logits& logits, RefactoringLabel true_label);

/// One decoupled-weight-decay Adam step over every tensor:
///   theta <- theta - lr * mhat / (sqrt(vhat) + eps) - lr * wd * theta
/// Bias vectors and layer-norm gains/biases take no decay. Parameters and
/// moments are re-quantized to the f32 grid after the update.
void adamw_step(Parameters& params, const Parameters& grads, OptimizerState& state,
                const TrainConfig& config);

/// Mean cross-entropy over the batch (per-sample loss on mean window logits)
/// and its exact gradients for every parameter tensor. `dropout_rng` enables
/// train-mode dropout; pass nullptr for the deterministic no-dropout path.
std::pair<double, Parameters> batch_loss_and_grads(const Parameters& params,
                                                   const ModelConfig& config,
                                                   std::span<const EncodedSample> batch,
                                                   DetRng* dropout_rng);

/// Evaluates a corpus: mean loss plus the metric report.
struct EvalResult {
    double loss = 0.0;
    Report report;
};
EvalResult evaluate(const Parameters& params, const ModelConfig& config,
                    std::span<const EncodedSample> samples);

/// Deterministic training loop: seeded per-epoch shuffle, one AdamW step per
/// batch, per-epoch validation, early stopping on validation macro-F1
/// (patience epochs without improvement), best checkpoint by validation
/// macro-F1 with ties to the earlier epoch.
TrainResult train(const Corpus& train_corpus, const Corpus& val_corpus, const Vocab& vocab,
                  const WindowPlan& plan, ModelConfig mconfig, const TrainConfig& tconfig);

/// History CSV: header + one row per epoch, 6-decimal fixed formatting.
std::string history_to_csv(const std::vector<EpochRecord>& history);

struct SearchTrial {
    TrainConfig config;
    double best_f1 = 0.0;
    int best_epoch = 0;
};

/// Seeded sampling without replacement from the grid product (re-draw on
/// duplicates) until the budget or the product is exhausted; the winner is
/// the trial with the highest validation macro-F1, ties to the earlier draw.
std::pair<TrainConfig, std::vector<SearchTrial>> random_search(
    const HPSearchSpace& space, uint64_t seed, const Corpus& train_corpus,
    const Corpus& val_corpus, const Vocab& vocab, const WindowPlan& plan,
    const ModelConfig& mconfig, const TrainConfig& base);

std::string search_to_json(const std::vector<SearchTrial>& trials);

} // namespace rose
