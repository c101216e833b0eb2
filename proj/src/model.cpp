// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include "rose/model.hpp"

#include <algorithm>
#include <cmath>

#include "rose/errors.hpp"

namespace rose {

namespace {
constexpr double kLnEps = 1e-5;
constexpr double kInitStd = 0.02;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
} // namespace

void ModelConfig::validate() const {
    if (vocab_size < kNumSpecials) {
        throw InvalidConfigError("vocab_size must cover the reserved ids");
    }
    if (d_model <= 0 || n_heads <= 0 || n_layers <= 0 || d_ff <= 0 || max_pos <= 0) {
        throw InvalidConfigError("model dimensions must be positive");
    }
    if (d_model % n_heads != 0) {
        throw InvalidConfigError("d_model must be divisible by n_heads");
    }
    if (n_classes != kNumClasses) {
        throw InvalidConfigError("the classifier is three-class");
    }
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw InvalidConfigError("dropout_rate must lie in [0, 1)");
    }
}

namespace {

template <typename Params, typename Fn>
void visit_tensors(Params& p, Fn&& fn) {
    fn("tok_emb", p.tok_emb);
    fn("pos_emb", p.pos_emb);
    for (size_t i = 0; i < p.layers.size(); ++i) {
        auto& l = p.layers[i];
        const std::string prefix = "layer" + std::to_string(i) + ".";
        fn(prefix + "ln1.gain", l.ln1_gain);
        fn(prefix + "ln1.bias", l.ln1_bias);
        fn(prefix + "attn.wq", l.wq);
        fn(prefix + "attn.bq", l.bq);
        fn(prefix + "attn.wk", l.wk);
        fn(prefix + "attn.bk", l.bk);
        fn(prefix + "attn.wv", l.wv);
        fn(prefix + "attn.bv", l.bv);
        fn(prefix + "attn.wo", l.wo);
        fn(prefix + "attn.bo", l.bo);
        fn(prefix + "ln2.gain", l.ln2_gain);
        fn(prefix + "ln2.bias", l.ln2_bias);
        fn(prefix + "ffn.w1", l.w1);
        fn(prefix + "ffn.b1", l.b1);
        fn(prefix + "ffn.w2", l.w2);
        fn(prefix + "ffn.b2", l.b2);
    }
    fn("cls.w", p.cls_w);
    fn("cls.b", p.cls_b);
}

} // namespace

void Parameters::for_each_tensor(const Visitor& fn) {
    visit_tensors(*this, fn);
}

void Parameters::for_each_tensor(const ConstVisitor& fn) const {
    visit_tensors(*this, fn);
}

size_t Parameters::scalar_count() const {
    size_t n = 0;
    for_each_tensor([&n](const std::string&, const Tensor& t) { n += t.size(); });
    return n;
}

Parameters zeros_like(const ModelConfig& config) {
    config.validate();
    Parameters p;
    p.tok_emb = Tensor(config.vocab_size, config.d_model);
    p.pos_emb = Tensor(config.max_pos, config.d_model);
    p.layers.resize(static_cast<size_t>(config.n_layers));
    for (LayerParams& l : p.layers) {
        l.ln1_gain = Tensor(1, config.d_model);
        l.ln1_bias = Tensor(1, config.d_model);
        l.wq = Tensor(config.d_model, config.d_model);
        l.bq = Tensor(1, config.d_model);
        l.wk = Tensor(config.d_model, config.d_model);
        l.bk = Tensor(1, config.d_model);
        l.wv = Tensor(config.d_model, config.d_model);
        l.bv = Tensor(1, config.d_model);
        l.wo = Tensor(config.d_model, config.d_model);
        l.bo = Tensor(1, config.d_model);
        l.ln2_gain = Tensor(1, config.d_model);
        l.ln2_bias = Tensor(1, config.d_model);
        l.w1 = Tensor(config.d_model, config.d_ff);
        l.b1 = Tensor(1, config.d_ff);
        l.w2 = Tensor(config.d_ff, config.d_model);
        l.b2 = Tensor(1, config.d_model);
    }
    p.cls_w = Tensor(config.d_model, config.n_classes);
    p.cls_b = Tensor(1, config.n_classes);
    return p;
}

bool decays(const std::string& tensor_name) {
    if (tensor_name == "tok_emb" || tensor_name == "pos_emb") {
        return true;
    }
    const size_t dot = tensor_name.rfind('.');
    const std::string last = dot == std::string::npos ? tensor_name : tensor_name.substr(dot + 1);
    return !last.empty() && last[0] == 'w';
}

Parameters init(const ModelConfig& config, uint64_t seed) {
    Parameters p = zeros_like(config);
    DetRng rng(seed);
    p.for_each_tensor([&rng](const std::string& name, Tensor& t) {
        if (decays(name)) {
            for (double& x : t.v) {
                x = rng.normal(0.0, kInitStd);
            }
        } else if (name.ends_with(".gain")) {
            t.fill(1.0);
        } // biases stay 0
        quantize_f32(t);
    });
    return p;
}

namespace {

void add_row_bias(Tensor& x, const Tensor& bias) {
    for (int i = 0; i < x.rows; ++i) {
        double* row = x.row(i);
        const double* b = bias.row(0);
        for (int j = 0; j < x.cols; ++j) {
            row[j] += b[j];
        }
    }
}

/// y = normalized rows of x (pre gain/bias), out = y * gain + bias.
void layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, Tensor& y, Tensor& out,
                std::vector<double>& rstd) {
    const int d = x.cols;
    y = Tensor(x.rows, d);
    out = Tensor(x.rows, d);
    rstd.assign(static_cast<size_t>(x.rows), 0.0);
    for (int i = 0; i < x.rows; ++i) {
        const double* xr = x.row(i);
        double mu = 0.0;
        for (int j = 0; j < d; ++j) {
            mu += xr[j];
        }
        mu /= d;
        double var = 0.0;
        for (int j = 0; j < d; ++j) {
            const double c = xr[j] - mu;
            var += c * c;
        }
        var /= d;
        const double r = 1.0 / std::sqrt(var + kLnEps);
        rstd[static_cast<size_t>(i)] = r;
        double* yr = y.row(i);
        double* outr = out.row(i);
        const double* g = gain.row(0);
        const double* b = bias.row(0);
        for (int j = 0; j < d; ++j) {
            yr[j] = (xr[j] - mu) * r;
            outr[j] = yr[j] * g[j] + b[j];
        }
    }
}

void copy_cols(const Tensor& src, int c0, int width, Tensor& dst) {
    dst = Tensor(src.rows, width);
    for (int i = 0; i < src.rows; ++i) {
        const double* s = src.row(i) + c0;
        double* d = dst.row(i);
        for (int j = 0; j < width; ++j) {
            d[j] = s[j];
        }
    }
}

void paste_cols(const Tensor& src, int c0, Tensor& dst) {
    for (int i = 0; i < src.rows; ++i) {
        const double* s = src.row(i);
        double* d = dst.row(i) + c0;
        for (int j = 0; j < src.cols; ++j) {
            d[j] = s[j];
        }
    }
}

void softmax_rows(Tensor& s) {
    for (int i = 0; i < s.rows; ++i) {
        double* row = s.row(i);
        double mx = row[0];
        for (int j = 1; j < s.cols; ++j) {
            mx = std::max(mx, row[j]);
        }
        double sum = 0.0;
        for (int j = 0; j < s.cols; ++j) {
            row[j] = std::exp(row[j] - mx);
            sum += row[j];
        }
        const double inv = 1.0 / sum;
        for (int j = 0; j < s.cols; ++j) {
            row[j] *= inv;
        }
    }
}

double gelu(double x) {
    return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2));
}

/// Inverted dropout: multiplier 0 or 1/(1-p), drawn row-major.
void apply_dropout(Tensor& x, double p, DetRng& rng, Tensor& mask_out) {
    mask_out = Tensor(x.rows, x.cols);
    const double keep_scale = 1.0 / (1.0 - p);
    for (size_t i = 0; i < x.v.size(); ++i) {
        const double mult = rng.uniform() < p ? 0.0 : keep_scale;
        mask_out.v[i] = mult;
        x.v[i] *= mult;
    }
}

} // namespace

Logits forward(const Parameters& params, const ModelConfig& config, const Window& window,
               Mode mode, DetRng* dropout_rng, ForwardTrace* trace) {
    config.validate();
    if (window.ids.size() != window.mask.size() || window.ids.empty()) {
        throw ShapeMismatchError("window ids/mask size mismatch");
    }
    if (static_cast<int>(window.ids.size()) > config.max_pos) {
        throw ShapeMismatchError("window longer than max_pos");
    }
    // The mask must be a non-empty prefix of real tokens.
    int m = 0;
    while (m < static_cast<int>(window.mask.size()) && window.mask[static_cast<size_t>(m)]) {
        ++m;
    }
    for (size_t j = static_cast<size_t>(m); j < window.mask.size(); ++j) {
        if (window.mask[j]) {
            throw ShapeMismatchError("window mask is not a prefix");
        }
    }
    if (m == 0) {
        throw ShapeMismatchError("window has no real tokens");
    }
    for (int32_t id : window.ids) {
        if (id < 0 || id >= config.vocab_size) {
            throw IdOutOfRangeError("token id " + std::to_string(id) + " outside vocabulary");
        }
    }
    const bool training = mode == Mode::Train && config.dropout_rate > 0.0;
    if (training && dropout_rng == nullptr) {
        throw InvalidConfigError("train-mode forward with dropout needs a dropout rng");
    }

    const int d = config.d_model;
    const int heads = config.n_heads;
    const int dk = d / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

    // Only the masked-in prefix is computed. Padding positions carry an
    // additive -1e9 attention score, which underflows to a weight of exactly
    // zero in f64, so skipping them is the same arithmetic.
    Tensor x(m, d);
    for (int i = 0; i < m; ++i) {
        const int32_t id = window.ids[static_cast<size_t>(i)];
        const double* te = params.tok_emb.row(id);
        const double* pe = params.pos_emb.row(i);
        double* xr = x.row(i);
        for (int j = 0; j < d; ++j) {
            xr[j] = te[j] + pe[j];
        }
    }
    if (trace) {
        trace->m = m;
        trace->ids.assign(window.ids.begin(), window.ids.begin() + m);
        trace->layers.clear();
        trace->layers.reserve(static_cast<size_t>(config.n_layers));
        trace->drop_emb = Tensor();
    }
    if (training) {
        Tensor mask;
        apply_dropout(x, config.dropout_rate, *dropout_rng, mask);
        if (trace) {
            trace->drop_emb = std::move(mask);
        }
    }
    if (trace) {
        trace->x0 = x;
    }

    for (int li = 0; li < config.n_layers; ++li) {
        const LayerParams& l = params.layers[static_cast<size_t>(li)];
        LayerTrace lt;

        layer_norm(x, l.ln1_gain, l.ln1_bias, lt.y1, lt.a, lt.rstd1);
        matmul(lt.a, l.wq, lt.q);
        add_row_bias(lt.q, l.bq);
        matmul(lt.a, l.wk, lt.k);
        add_row_bias(lt.k, l.bk);
        matmul(lt.a, l.wv, lt.v);
        add_row_bias(lt.v, l.bv);

        lt.ctx = Tensor(m, d);
        lt.att.resize(static_cast<size_t>(heads));
        for (int h = 0; h < heads; ++h) {
            Tensor qh, kh, vh;
            copy_cols(lt.q, h * dk, dk, qh);
            copy_cols(lt.k, h * dk, dk, kh);
            copy_cols(lt.v, h * dk, dk, vh);
            Tensor scores;
            matmul_a_bt(qh, kh, scores);
            for (double& s : scores.v) {
                s *= scale;
            }
            softmax_rows(scores);
            Tensor ctx_h;
            matmul(scores, vh, ctx_h);
            paste_cols(ctx_h, h * dk, lt.ctx);
            lt.att[static_cast<size_t>(h)] = std::move(scores);
        }

        Tensor attn_out;
        matmul(lt.ctx, l.wo, attn_out);
        add_row_bias(attn_out, l.bo);
        if (training) {
            apply_dropout(attn_out, config.dropout_rate, *dropout_rng, lt.drop_attn);
        }
        for (size_t i = 0; i < x.v.size(); ++i) {
            x.v[i] += attn_out.v[i];
        }

        layer_norm(x, l.ln2_gain, l.ln2_bias, lt.y2, lt.b2out, lt.rstd2);
        matmul(lt.b2out, l.w1, lt.f1);
        add_row_bias(lt.f1, l.b1);
        lt.g = Tensor(m, config.d_ff);
        for (size_t i = 0; i < lt.f1.v.size(); ++i) {
            lt.g.v[i] = gelu(lt.f1.v[i]);
        }
        Tensor ffn_out;
        matmul(lt.g, l.w2, ffn_out);
        add_row_bias(ffn_out, l.b2);
        if (training) {
            apply_dropout(ffn_out, config.dropout_rate, *dropout_rng, lt.drop_ffn);
        }
        for (size_t i = 0; i < x.v.size(); ++i) {
            x.v[i] += ffn_out.v[i];
        }

        if (trace) {
            trace->layers.push_back(std::move(lt));
        }
    }

    Logits logits{};
    const double* h0 = x.row(0);
    for (int c = 0; c < config.n_classes; ++c) {
        double s = params.cls_b.at(0, c);
        for (int j = 0; j < d; ++j) {
            s += h0[j] * params.cls_w.at(j, c);
        }
        logits[static_cast<size_t>(c)] = s;
    }
    if (trace) {
        trace->x_final = std::move(x);
        trace->logits = logits;
    }
    return logits;
}

std::array<double, 3> predict_proba(const Logits& logits) {
    for (double z : logits) {
        if (!std::isfinite(z)) {
            throw NonFiniteError("logits must be finite");
        }
    }
    const double mx = std::max({logits[0], logits[1], logits[2]});
    std::array<double, 3> p{};
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
        p[c] = std::exp(logits[c] - mx);
        sum += p[c];
    }
    for (int c = 0; c < 3; ++c) {
        p[c] /= sum;
    }
    return p;
}

Prediction classify(const Parameters& params, const ModelConfig& config, const Vocab& vocab,
                    const WindowPlan& plan, std::string_view code) {
    TokenSeq seq = encode(code, vocab);
    std::vector<Window> windows = chunk(seq, plan);
    std::vector<std::array<double, 3>> logits;
    logits.reserve(windows.size());
    for (const Window& w : windows) {
        logits.push_back(forward(params, config, w, Mode::Eval));
    }
    const std::array<double, 3> agg = aggregate(logits);
    const std::array<double, 3> probs = predict_proba(agg);
    int best = 0;
    for (int c = 1; c < 3; ++c) {
        if (agg[c] > agg[best]) {
            best = c; // ties keep the lowest class code
        }
    }
    return Prediction{static_cast<RefactoringLabel>(best), probs};
}

// gelu derivative, used by the backward pass in the trainer.
double gelu_grad(double x) {
    const double cdf = 0.5 * (1.0 + std::erf(x * M_SQRT1_2));
    const double pdf = std::exp(-0.5 * x * x) * kInvSqrt2Pi;
    return cdf + x * pdf;
}

} // namespace rose
