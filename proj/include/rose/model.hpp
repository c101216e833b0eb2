// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rose/labels.hpp"
#include "rose/tensor.hpp"
#include "rose/tokenizer.hpp"
#include "rose/windowing.hpp"

namespace rose {

/// Hyperparameters of the mini encoder.
struct ModelConfig {
    int vocab_size = 0;
    int d_model = 128;
    int n_heads = 4;
    int n_layers = 2;
    int d_ff = 512;
    int max_pos = 512;
    int n_classes = kNumClasses;
    double dropout_rate = 0.1; // train mode only

    void validate() const; // throws InvalidConfigError
};

/// One encoder layer's tensors. Layer norms are the pre-norm pair: ln1
/// before attention, ln2 before the feed-forward block.
struct LayerParams {
    Tensor ln1_gain, ln1_bias;
    Tensor wq, bq, wk, bk, wv, bv, wo, bo;
    Tensor ln2_gain, ln2_bias;
    Tensor w1, b1, w2, b2;
};

/// All named weight tensors. The manifest order defined by for_each_tensor
/// is the canonical order: initialization draws, optimizer state, and the
/// checkpoint tensor section all follow it.
struct Parameters {
    Tensor tok_emb; // [vocab_size, d_model]
    Tensor pos_emb; // [max_pos, d_model]
    std::vector<LayerParams> layers;
    Tensor cls_w; // [d_model, n_classes]
    Tensor cls_b; // [1, n_classes]

    using Visitor = std::function<void(const std::string&, Tensor&)>;
    using ConstVisitor = std::function<void(const std::string&, const Tensor&)>;
    void for_each_tensor(const Visitor& fn);
    void for_each_tensor(const ConstVisitor& fn) const;

    size_t scalar_count() const;
};

/// Zero-filled parameter set with the shapes implied by the config
/// (gradient and optimizer-moment containers reuse this layout).
Parameters zeros_like(const ModelConfig& config);

/// Whether a manifest tensor takes weight decay. Layer-norm gains/biases and
/// every bias vector are excluded.
bool decays(const std::string& tensor_name);

/// Seeded initialization: weight matrices ~ Normal(0, 0.02), biases 0,
/// layer-norm gains 1. Values land on the f32 grid so checkpoints round-trip
/// bitwise from the very first step.
Parameters init(const ModelConfig& config, uint64_t seed);

using Logits = std::array<double, 3>;

enum class Mode { Train, Eval };

/// Per-window activation record captured by forward() for the backward pass.
struct LayerTrace {
    std::vector<double> rstd1;    // ln1 1/sqrt(var+eps) per row
    Tensor y1;                    // ln1 normalized (pre gain/bias) [m,d]
    Tensor a;                     // ln1 output [m,d]
    Tensor q, k, v;               // projections [m,d]
    std::vector<Tensor> att;      // per-head attention rows [m,m]
    Tensor ctx;                   // concatenated head outputs [m,d]
    Tensor drop_attn;             // dropout multipliers (train) [m,d]
    std::vector<double> rstd2;    // ln2 stats
    Tensor y2;                    // ln2 normalized [m,d]
    Tensor b2out;                 // ln2 output [m,d]
    Tensor f1;                    // ffn pre-activation [m,d_ff]
    Tensor g;                     // gelu(f1) [m,d_ff]
    Tensor drop_ffn;              // dropout multipliers (train) [m,d]
};

struct ForwardTrace {
    int m = 0;                    // real (masked-in) length
    std::vector<int32_t> ids;     // the m real ids
    Tensor drop_emb;              // dropout multipliers (train) [m,d]
    Tensor x0;                    // embedded input after dropout [m,d]
    std::vector<LayerTrace> layers;
    Tensor x_final;               // encoder output [m,d]
    Logits logits{};
};

/// Encoder forward pass over one window: token + learned positional
/// embeddings, n_layers of pre-norm multi-head self-attention and GELU
/// feed-forward with residuals, then an affine classifier on the position-0
/// vector. Padding receives -1e9 additive attention scores, which in f64
/// underflows to exactly zero weight, so only the masked-in prefix
/// participates. Train mode applies inverted dropout (embedding output,
/// attention output, ffn output) from `dropout_rng`.
Logits forward(const Parameters& params, const ModelConfig& config, const Window& window,
               Mode mode, DetRng* dropout_rng = nullptr, ForwardTrace* trace = nullptr);

/// Numerically stable softmax; components are positive and sum to 1.
std::array<double, 3> predict_proba(const Logits& logits);

struct Prediction {
    RefactoringLabel label;
    std::array<double, 3> probabilities;
};

/// encode -> chunk -> per-window forward (eval) -> mean logits -> softmax ->
/// argmax, ties to the lowest class code.
Prediction classify(const Parameters& params, const ModelConfig& config, const Vocab& vocab,
                    const WindowPlan& plan, std::string_view code);

/// d/dx gelu(x), exact (erf form).
double gelu_grad(double x);

} // namespace rose
