// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include "rose/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "rose/errors.hpp"

namespace rose {

void TrainConfig::validate() const {
    if (learning_rate <= 0.0) {
        throw InvalidConfigError("learning_rate must be positive");
    }
    if (batch_size < 1) {
        throw InvalidConfigError("batch_size must be at least 1");
    }
    if (epochs < 1) {
        throw InvalidConfigError("epochs must be at least 1");
    }
    if (early_stop_patience < 1) {
        throw InvalidConfigError("early_stop_patience must be at least 1");
    }
    if (weight_decay < 0.0) {
        throw InvalidConfigError("weight_decay must be non-negative");
    }
}

std::vector<EncodedSample> encode_corpus(const Corpus& corpus, const Vocab& vocab,
                                         const WindowPlan& plan) {
    std::vector<EncodedSample> out;
    out.reserve(corpus.samples.size());
    for (const Sample& s : corpus.samples) {
        EncodedSample es;
        es.label = s.label;
        es.windows = chunk(encode(s.code, vocab), plan);
        out.push_back(std::move(es));
    }
    return out;
}

double cross_entropy(const Logits& logits, RefactoringLabel true_label) {
    for (double z : logits) {
        if (!std::isfinite(z)) {
            throw NonFiniteError("logits must be finite");
        }
    }
    const double mx = std::max({logits[0], logits[1], logits[2]});
    double sum = 0.0;
    for (double z : logits) {
        sum += std::exp(z - mx);
    }
    const double lse = mx + std::log(sum);
    return lse - logits[static_cast<size_t>(true_label)];
}

namespace {

std::vector<std::pair<std::string, Tensor*>> tensor_list(Parameters& p) {
    std::vector<std::pair<std::string, Tensor*>> out;
    p.for_each_tensor([&out](const std::string& name, Tensor& t) { out.emplace_back(name, &t); });
    return out;
}

std::vector<std::pair<std::string, const Tensor*>> tensor_list(const Parameters& p) {
    std::vector<std::pair<std::string, const Tensor*>> out;
    p.for_each_tensor(
        [&out](const std::string& name, const Tensor& t) { out.emplace_back(name, &t); });
    return out;
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

void paste_cols_add(const Tensor& src, int c0, Tensor& dst) {
    for (int i = 0; i < src.rows; ++i) {
        const double* s = src.row(i);
        double* d = dst.row(i) + c0;
        for (int j = 0; j < src.cols; ++j) {
            d[j] += s[j];
        }
    }
}

void add_into(Tensor& dst, const Tensor& src) {
    for (size_t i = 0; i < dst.v.size(); ++i) {
        dst.v[i] += src.v[i];
    }
}

void add_colsum_into(Tensor& bias_grad, const Tensor& d) {
    for (int i = 0; i < d.rows; ++i) {
        const double* row = d.row(i);
        double* b = bias_grad.row(0);
        for (int j = 0; j < d.cols; ++j) {
            b[j] += row[j];
        }
    }
}

void apply_mask(Tensor& x, const Tensor& mask) {
    if (mask.size() == 0) {
        return; // no dropout recorded
    }
    for (size_t i = 0; i < x.v.size(); ++i) {
        x.v[i] *= mask.v[i];
    }
}

/// dX <- dX + layer-norm backward of dOut. y is the normalized input, rstd
/// the per-row 1/sqrt(var+eps); gain/bias gradients accumulate.
void layer_norm_backward(const Tensor& d_out, const Tensor& y, const std::vector<double>& rstd,
                         const Tensor& gain, Tensor& d_gain, Tensor& d_bias, Tensor& dx) {
    const int d = d_out.cols;
    for (int i = 0; i < d_out.rows; ++i) {
        const double* dor = d_out.row(i);
        const double* yr = y.row(i);
        const double* g = gain.row(0);
        double* dgr = d_gain.row(0);
        double* dbr = d_bias.row(0);
        double mean_dz = 0.0;
        double mean_dzy = 0.0;
        for (int j = 0; j < d; ++j) {
            dgr[j] += dor[j] * yr[j];
            dbr[j] += dor[j];
            const double dz = dor[j] * g[j];
            mean_dz += dz;
            mean_dzy += dz * yr[j];
        }
        mean_dz /= d;
        mean_dzy /= d;
        const double r = rstd[static_cast<size_t>(i)];
        double* dxr = dx.row(i);
        for (int j = 0; j < d; ++j) {
            const double dz = dor[j] * g[j];
            dxr[j] += r * (dz - mean_dz - yr[j] * mean_dzy);
        }
    }
}

/// Reverse pass over one window given d(loss)/d(logits).
void backward_window(const Parameters& params, const ModelConfig& config, const ForwardTrace& tr,
                     const Logits& dlogits, Parameters& grads) {
    const int m = tr.m;
    const int d = config.d_model;
    const int heads = config.n_heads;
    const int dk = d / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

    // classification head
    for (int c = 0; c < config.n_classes; ++c) {
        grads.cls_b.at(0, c) += dlogits[static_cast<size_t>(c)];
    }
    const double* h0 = tr.x_final.row(0);
    for (int j = 0; j < d; ++j) {
        for (int c = 0; c < config.n_classes; ++c) {
            grads.cls_w.at(j, c) += h0[j] * dlogits[static_cast<size_t>(c)];
        }
    }
    Tensor dx(m, d);
    for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int c = 0; c < config.n_classes; ++c) {
            s += params.cls_w.at(j, c) * dlogits[static_cast<size_t>(c)];
        }
        dx.at(0, j) = s;
    }

    for (int li = config.n_layers - 1; li >= 0; --li) {
        const LayerParams& l = params.layers[static_cast<size_t>(li)];
        LayerParams& gl = grads.layers[static_cast<size_t>(li)];
        const LayerTrace& lt = tr.layers[static_cast<size_t>(li)];

        // feed-forward residual branch
        Tensor d_ffn = dx;
        apply_mask(d_ffn, lt.drop_ffn);
        Tensor tmp;
        matmul_at_b(lt.g, d_ffn, tmp);
        add_into(gl.w2, tmp);
        add_colsum_into(gl.b2, d_ffn);
        Tensor dg;
        matmul_a_bt(d_ffn, l.w2, dg);
        for (size_t i = 0; i < dg.v.size(); ++i) {
            dg.v[i] *= gelu_grad(lt.f1.v[i]);
        }
        matmul_at_b(lt.b2out, dg, tmp);
        add_into(gl.w1, tmp);
        add_colsum_into(gl.b1, dg);
        Tensor d_b2out;
        matmul_a_bt(dg, l.w1, d_b2out);
        layer_norm_backward(d_b2out, lt.y2, lt.rstd2, l.ln2_gain, gl.ln2_gain, gl.ln2_bias, dx);

        // attention residual branch
        Tensor d_attn = dx;
        apply_mask(d_attn, lt.drop_attn);
        matmul_at_b(lt.ctx, d_attn, tmp);
        add_into(gl.wo, tmp);
        add_colsum_into(gl.bo, d_attn);
        Tensor d_ctx;
        matmul_a_bt(d_attn, l.wo, d_ctx);

        Tensor dq(m, d), dkt(m, d), dv(m, d);
        for (int h = 0; h < heads; ++h) {
            Tensor qh, kh, vh, d_ctx_h;
            copy_cols(tr.layers[static_cast<size_t>(li)].q, h * dk, dk, qh);
            copy_cols(lt.k, h * dk, dk, kh);
            copy_cols(lt.v, h * dk, dk, vh);
            copy_cols(d_ctx, h * dk, dk, d_ctx_h);
            const Tensor& probs = lt.att[static_cast<size_t>(h)];

            Tensor dp;
            matmul_a_bt(d_ctx_h, vh, dp);
            Tensor dvh;
            matmul_at_b(probs, d_ctx_h, dvh);
            // softmax rows
            Tensor ds(m, m);
            for (int i = 0; i < m; ++i) {
                const double* pr = probs.row(i);
                const double* dpr = dp.row(i);
                double dot = 0.0;
                for (int j = 0; j < m; ++j) {
                    dot += dpr[j] * pr[j];
                }
                double* dsr = ds.row(i);
                for (int j = 0; j < m; ++j) {
                    dsr[j] = pr[j] * (dpr[j] - dot);
                }
            }
            Tensor dqh;
            matmul(ds, kh, dqh);
            Tensor dkh;
            matmul_at_b(ds, qh, dkh);
            for (double& x : dqh.v) {
                x *= scale;
            }
            for (double& x : dkh.v) {
                x *= scale;
            }
            paste_cols_add(dqh, h * dk, dq);
            paste_cols_add(dkh, h * dk, dkt);
            paste_cols_add(dvh, h * dk, dv);
        }

        matmul_at_b(lt.a, dq, tmp);
        add_into(gl.wq, tmp);
        add_colsum_into(gl.bq, dq);
        matmul_at_b(lt.a, dkt, tmp);
        add_into(gl.wk, tmp);
        add_colsum_into(gl.bk, dkt);
        matmul_at_b(lt.a, dv, tmp);
        add_into(gl.wv, tmp);
        add_colsum_into(gl.bv, dv);

        Tensor da;
        matmul_a_bt(dq, l.wq, da);
        Tensor da2;
        matmul_a_bt(dkt, l.wk, da2);
        add_into(da, da2);
        matmul_a_bt(dv, l.wv, da2);
        add_into(da, da2);
        layer_norm_backward(da, lt.y1, lt.rstd1, l.ln1_gain, gl.ln1_gain, gl.ln1_bias, dx);
    }

    apply_mask(dx, tr.drop_emb);
    for (int i = 0; i < m; ++i) {
        const double* dxr = dx.row(i);
        double* te = grads.tok_emb.row(tr.ids[static_cast<size_t>(i)]);
        double* pe = grads.pos_emb.row(i);
        for (int j = 0; j < d; ++j) {
            te[j] += dxr[j];
            pe[j] += dxr[j];
        }
    }
}

} // namespace

void adamw_step(Parameters& params, const Parameters& grads, OptimizerState& state,
                const TrainConfig& config) {
    auto ps = tensor_list(params);
    auto gs = tensor_list(grads);
    auto ms = tensor_list(state.m);
    auto vs = tensor_list(state.v);
    if (ps.size() != gs.size()) {
        throw ShapeMismatchError("gradient manifest does not match parameters");
    }
    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(config.beta1, t);
    const double bc2 = 1.0 - std::pow(config.beta2, t);
    for (size_t i = 0; i < ps.size(); ++i) {
        Tensor& theta = *ps[i].second;
        const Tensor& g = *gs[i].second;
        Tensor& m = *ms[i].second;
        Tensor& v = *vs[i].second;
        if (g.rows != theta.rows || g.cols != theta.cols) {
            throw ShapeMismatchError("gradient shape mismatch at " + ps[i].first);
        }
        const bool decay = decays(ps[i].first) && config.weight_decay > 0.0;
        for (size_t j = 0; j < theta.v.size(); ++j) {
            const double grad = g.v[j];
            m.v[j] = config.beta1 * m.v[j] + (1.0 - config.beta1) * grad;
            v.v[j] = config.beta2 * v.v[j] + (1.0 - config.beta2) * grad * grad;
            const double mhat = m.v[j] / bc1;
            const double vhat = v.v[j] / bc2;
            const double prev = theta.v[j];
            double next = prev - config.learning_rate * (mhat / (std::sqrt(vhat) + config.epsilon));
            if (decay) {
                next -= config.learning_rate * config.weight_decay * prev;
            }
            theta.v[j] = next;
        }
        quantize_f32(theta);
        quantize_f32(m);
        quantize_f32(v);
    }
}

std::pair<double, Parameters> batch_loss_and_grads(const Parameters& params,
                                                   const ModelConfig& config,
                                                   std::span<const EncodedSample> batch,
                                                   DetRng* dropout_rng) {
    if (batch.empty()) {
        throw EmptyInputError("batch must be non-empty");
    }
    Parameters grads = zeros_like(config);
    const Mode mode = dropout_rng ? Mode::Train : Mode::Eval;
    double loss_sum = 0.0;
    for (const EncodedSample& sample : batch) {
        std::vector<ForwardTrace> traces(sample.windows.size());
        std::vector<std::array<double, 3>> logits;
        logits.reserve(sample.windows.size());
        for (size_t w = 0; w < sample.windows.size(); ++w) {
            logits.push_back(
                forward(params, config, sample.windows[w], mode, dropout_rng, &traces[w]));
        }
        const Logits agg = aggregate(logits);
        loss_sum += cross_entropy(agg, sample.label);
        const std::array<double, 3> probs = predict_proba(agg);
        Logits d_agg{};
        for (int c = 0; c < 3; ++c) {
            d_agg[c] = probs[c] / static_cast<double>(batch.size());
        }
        d_agg[static_cast<size_t>(sample.label)] -= 1.0 / static_cast<double>(batch.size());
        Logits d_window{};
        for (int c = 0; c < 3; ++c) {
            d_window[c] = d_agg[c] / static_cast<double>(sample.windows.size());
        }
        for (const ForwardTrace& trace : traces) {
            backward_window(params, config, trace, d_window, grads);
        }
    }
    return {loss_sum / static_cast<double>(batch.size()), std::move(grads)};
}

EvalResult evaluate(const Parameters& params, const ModelConfig& config,
                    std::span<const EncodedSample> samples) {
    if (samples.empty()) {
        throw EmptyCorpusError("evaluation set is empty");
    }
    std::vector<RefactoringLabel> truths, preds;
    truths.reserve(samples.size());
    preds.reserve(samples.size());
    double loss_sum = 0.0;
    for (const EncodedSample& s : samples) {
        std::vector<std::array<double, 3>> logits;
        logits.reserve(s.windows.size());
        for (const Window& w : s.windows) {
            logits.push_back(forward(params, config, w, Mode::Eval));
        }
        const Logits agg = aggregate(logits);
        loss_sum += cross_entropy(agg, s.label);
        int best = 0;
        for (int c = 1; c < 3; ++c) {
            if (agg[c] > agg[best]) {
                best = c;
            }
        }
        truths.push_back(s.label);
        preds.push_back(static_cast<RefactoringLabel>(best));
    }
    EvalResult res;
    res.loss = loss_sum / static_cast<double>(samples.size());
    res.report = summarize(confusion(truths, preds));
    return res;
}

TrainResult train(const Corpus& train_corpus, const Corpus& val_corpus, const Vocab& vocab,
                  const WindowPlan& plan, ModelConfig mconfig, const TrainConfig& tconfig) {
    tconfig.validate();
    if (train_corpus.empty() || val_corpus.empty()) {
        throw EmptyCorpusError("training and validation corpora must be non-empty");
    }
    mconfig.vocab_size = vocab.size();
    mconfig.validate();

    const std::vector<EncodedSample> train_set = encode_corpus(train_corpus, vocab, plan);
    const std::vector<EncodedSample> val_set = encode_corpus(val_corpus, vocab, plan);

    TrainResult result;
    result.train_config = tconfig;
    result.model_config = mconfig;

    Parameters params = init(mconfig, tconfig.seed);
    OptimizerState opt;
    opt.m = zeros_like(mconfig);
    opt.v = zeros_like(mconfig);

    double best_f1 = -1.0;
    int epochs_since_improvement = 0;

    std::vector<size_t> order(train_set.size());
    for (int epoch = 1; epoch <= tconfig.epochs; ++epoch) {
        // Per-epoch seeds are derived, not consumed from a running stream,
        // so a resumed run shuffles identically.
        DetRng shuffle_rng(mix_seed(tconfig.seed, static_cast<uint64_t>(epoch), 1));
        DetRng dropout_rng(mix_seed(tconfig.seed, static_cast<uint64_t>(epoch), 2));
        std::iota(order.begin(), order.end(), size_t{0});
        shuffle_rng.shuffle(order);
        std::vector<EncodedSample> epoch_set;
        epoch_set.reserve(train_set.size());
        for (size_t idx : order) {
            epoch_set.push_back(train_set[idx]);
        }

        double loss_sum = 0.0;
        for (size_t start = 0; start < epoch_set.size(); start += tconfig.batch_size) {
            const size_t count = std::min<size_t>(tconfig.batch_size, epoch_set.size() - start);
            std::span<const EncodedSample> batch(epoch_set.data() + start, count);
            auto [loss, grads] = batch_loss_and_grads(params, mconfig, batch, &dropout_rng);
            adamw_step(params, grads, opt, tconfig);
            loss_sum += loss * static_cast<double>(count);
        }

        const EvalResult val = evaluate(params, mconfig, val_set);
        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = loss_sum / static_cast<double>(epoch_set.size());
        rec.val_loss = val.loss;
        rec.accuracy = val.report.accuracy;
        rec.precision = val.report.macro_precision;
        rec.recall = val.report.macro_recall;
        rec.f1 = val.report.macro_f1;
        result.history.push_back(rec);

        if (rec.f1 > best_f1) {
            best_f1 = rec.f1;
            result.best_epoch = epoch;
            result.best_params = params;
            result.best_optimizer = opt;
            epochs_since_improvement = 0;
        } else {
            ++epochs_since_improvement;
            if (epochs_since_improvement >= tconfig.early_stop_patience) {
                break;
            }
        }
    }
    return result;
}

std::string history_to_csv(const std::vector<EpochRecord>& history) {
    std::ostringstream os;
    os << "epoch,train_loss,val_loss,accuracy,precision,recall,f1\n";
    char buf[160];
    for (const EpochRecord& r : history) {
        std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.epoch,
                      r.train_loss, r.val_loss, r.accuracy, r.precision, r.recall, r.f1);
        os << buf;
    }
    return os.str();
}

std::pair<TrainConfig, std::vector<SearchTrial>> random_search(
    const HPSearchSpace& space, uint64_t seed, const Corpus& train_corpus,
    const Corpus& val_corpus, const Vocab& vocab, const WindowPlan& plan,
    const ModelConfig& mconfig, const TrainConfig& base) {
    if (space.budget < 1 || space.lr_grid.empty() || space.batch_grid.empty() ||
        space.wd_grid.empty()) {
        throw InvalidConfigError("search space must be non-empty with budget >= 1");
    }
    const size_t total = space.lr_grid.size() * space.batch_grid.size() * space.wd_grid.size();
    const size_t want = std::min<size_t>(static_cast<size_t>(space.budget), total);
    DetRng rng(seed);
    std::vector<size_t> drawn;
    std::vector<bool> seen(total, false);
    while (drawn.size() < want) {
        const size_t idx = rng.uniform_index(total);
        if (seen[idx]) {
            continue; // re-draw duplicates
        }
        seen[idx] = true;
        drawn.push_back(idx);
    }

    std::vector<SearchTrial> trials;
    trials.reserve(drawn.size());
    size_t best_trial = 0;
    for (size_t n = 0; n < drawn.size(); ++n) {
        const size_t idx = drawn[n];
        const size_t wd_i = idx % space.wd_grid.size();
        const size_t b_i = (idx / space.wd_grid.size()) % space.batch_grid.size();
        const size_t lr_i = idx / (space.wd_grid.size() * space.batch_grid.size());
        TrainConfig cfg = base;
        cfg.learning_rate = space.lr_grid[lr_i];
        cfg.batch_size = space.batch_grid[b_i];
        cfg.weight_decay = space.wd_grid[wd_i];
        TrainResult res = train(train_corpus, val_corpus, vocab, plan, mconfig, cfg);
        SearchTrial trial;
        trial.config = cfg;
        trial.best_epoch = res.best_epoch;
        trial.best_f1 = res.history[static_cast<size_t>(res.best_epoch - 1)].f1;
        trials.push_back(trial);
        if (trial.best_f1 > trials[best_trial].best_f1) {
            best_trial = n; // ties keep the earlier draw
        }
    }
    return {trials[best_trial].config, trials};
}

std::string search_to_json(const std::vector<SearchTrial>& trials) {
    std::ostringstream os;
    char buf[128];
    os << "[";
    for (size_t i = 0; i < trials.size(); ++i) {
        if (i) {
            os << ",";
        }
        const SearchTrial& t = trials[i];
        os << "{\"best_epoch\":" << t.best_epoch;
        std::snprintf(buf, sizeof buf, ",\"best_f1\":%.6f", t.best_f1);
        os << buf;
        std::snprintf(buf, sizeof buf,
                      ",\"config\":{\"batch_size\":%d,\"learning_rate\":%.6f,"
                      "\"weight_decay\":%.6f}}",
                      t.config.batch_size, t.config.learning_rate, t.config.weight_decay);
        os << buf;
    }
    os << "]\n";
    return os.str();
}

} // namespace rose
