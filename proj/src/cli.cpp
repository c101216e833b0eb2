// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include "rose/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rose/checkpoint.hpp"
#include "rose/errors.hpp"
#include "rose/metrics.hpp"
#include "rose/synth.hpp"

namespace rose::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << content;
    if (!out) {
        throw IoError("write failed for " + path);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void print_counts(const Corpus& corpus) {
    const auto counts = corpus.counts();
    for (int c = 0; c < kNumClasses; ++c) {
        std::printf("%-13s %ld\n", std::string(label_name(kAllLabels[c])).c_str(), counts[c]);
    }
}

long to_long(const std::string& v, const std::string& key) {
    try {
        return std::stol(v);
    } catch (const std::exception&) {
        throw InvalidConfigError("config value for " + key + " is not an integer: " + v);
    }
}

double to_double(const std::string& v, const std::string& key) {
    try {
        return std::stod(v);
    } catch (const std::exception&) {
        throw InvalidConfigError("config value for " + key + " is not a number: " + v);
    }
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw InvalidConfigError("config value for " + key + " is not a boolean: " + v);
}

/// Loads checkpoint + vocabulary and cross-checks the stored fingerprint.
struct LoadedModel {
    Checkpoint ckpt;
    Vocab vocab;
};

LoadedModel load_model(const RunConfig& cfg) {
    LoadedModel lm{load_checkpoint(cfg.checkpoint_path), Vocab{}};
    std::string vocab_path = cfg.vocab_path;
    if (vocab_path.empty()) {
        // the stored reference is relative to the checkpoint's directory
        fs::path stored(lm.ckpt.vocab_path);
        vocab_path = stored.is_absolute()
                         ? stored.string()
                         : (fs::path(cfg.checkpoint_path).parent_path() / stored).string();
    }
    lm.vocab = load_vocab(vocab_path);
    if (vocab_fingerprint(lm.vocab) != lm.ckpt.vocab_hash) {
        throw ShapeMismatchError("vocabulary does not match the checkpoint fingerprint");
    }
    return lm;
}

} // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path);
    }
    std::map<std::string, std::string> kv;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') {
            continue;
        }
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw InvalidConfigError("config line " + std::to_string(line_no) +
                                     " is not `section.key = value`");
        }
        kv[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
    }
    return kv;
}

void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "paths.corpus") {
            cfg.corpus_path = value;
        } else if (key == "paths.vocab") {
            cfg.vocab_path = value;
        } else if (key == "paths.checkpoint") {
            cfg.checkpoint_path = value;
        } else if (key == "paths.out_dir") {
            cfg.out_dir = value;
        } else if (key == "window.window_len") {
            cfg.plan.window_len = static_cast<int>(to_long(value, key));
        } else if (key == "window.stride") {
            cfg.plan.stride = static_cast<int>(to_long(value, key));
        } else if (key == "window.model_max") {
            cfg.plan.model_max = static_cast<int>(to_long(value, key));
        } else if (key == "model.d_model") {
            cfg.model.d_model = static_cast<int>(to_long(value, key));
        } else if (key == "model.n_heads") {
            cfg.model.n_heads = static_cast<int>(to_long(value, key));
        } else if (key == "model.n_layers") {
            cfg.model.n_layers = static_cast<int>(to_long(value, key));
        } else if (key == "model.d_ff") {
            cfg.model.d_ff = static_cast<int>(to_long(value, key));
        } else if (key == "model.max_pos") {
            cfg.model.max_pos = static_cast<int>(to_long(value, key));
        } else if (key == "model.dropout_rate") {
            cfg.model.dropout_rate = to_double(value, key);
        } else if (key == "train.learning_rate") {
            cfg.train.learning_rate = to_double(value, key);
        } else if (key == "train.batch_size") {
            cfg.train.batch_size = static_cast<int>(to_long(value, key));
        } else if (key == "train.epochs") {
            cfg.train.epochs = static_cast<int>(to_long(value, key));
        } else if (key == "train.weight_decay") {
            cfg.train.weight_decay = to_double(value, key);
        } else if (key == "train.beta1") {
            cfg.train.beta1 = to_double(value, key);
        } else if (key == "train.beta2") {
            cfg.train.beta2 = to_double(value, key);
        } else if (key == "train.epsilon") {
            cfg.train.epsilon = to_double(value, key);
        } else if (key == "train.patience") {
            cfg.train.early_stop_patience = static_cast<int>(to_long(value, key));
        } else if (key == "train.seed") {
            cfg.train.seed = static_cast<uint64_t>(to_long(value, key));
        } else if (key == "split.train") {
            cfg.f_train = to_double(value, key);
        } else if (key == "split.val") {
            cfg.f_val = to_double(value, key);
        } else if (key == "split.test") {
            cfg.f_test = to_double(value, key);
        } else if (key == "corpus.balance") {
            cfg.balance = to_bool(value, key);
        } else if (key == "vocab.max_size") {
            cfg.vocab_cap = static_cast<size_t>(to_long(value, key));
        } else if (key == "kfold.k") {
            cfg.k_folds = static_cast<int>(to_long(value, key));
        } else if (key == "kfold.group_by_project") {
            cfg.group_by_project = to_bool(value, key);
        } else if (key == "search.budget") {
            cfg.search.budget = static_cast<int>(to_long(value, key));
        } else {
            throw InvalidConfigError("unknown config key: " + key);
        }
    }
}

void apply_env_seed(RunConfig& cfg) {
    if (const char* env = std::getenv("ROSE_SEED")) {
        cfg.train.seed = static_cast<uint64_t>(to_long(env, "ROSE_SEED"));
    }
}

int run_ingest(const std::string& tsv_path, const std::string& out_path) {
    try {
        const Corpus corpus = load_tsv(tsv_path);
        if (corpus.empty()) {
            std::fprintf(stderr, "error: empty corpus\n");
            return kExitInputError;
        }
        print_counts(corpus);
        if (!out_path.empty()) {
            save_tsv(corpus, out_path);
            std::printf("wrote %zu samples to %s\n", corpus.size(), out_path.c_str());
        }
        return kExitOk;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    }
}

int run_synth(const std::string& out_path, long per_class, uint64_t seed) {
    try {
        const Corpus corpus = synth_corpus(per_class, seed);
        save_tsv(corpus, out_path);
        std::printf("wrote %zu samples (%ld per class) to %s\n", corpus.size(), per_class,
                    out_path.c_str());
        return kExitOk;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    }
}

int run_train(const RunConfig& cfg) {
    Corpus corpus, train_c, val_c, test_c;
    try {
        corpus = load_tsv(cfg.corpus_path);
        if (corpus.empty()) {
            std::fprintf(stderr, "error: empty corpus\n");
            return kExitInputError;
        }
        if (cfg.balance) {
            corpus = balance_undersample(corpus, cfg.train.seed);
            const auto counts = corpus.counts();
            std::printf("balanced corpus per-label counts: %ld/%ld/%ld\n", counts[0], counts[1],
                        counts[2]);
        }
        std::tie(train_c, val_c, test_c) =
            split_train_val_test(corpus, cfg.f_train, cfg.f_val, cfg.f_test, cfg.train.seed);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    }
    try {
        fs::create_directories(cfg.out_dir);
        const Vocab vocab = build_vocab(train_c, cfg.vocab_cap);
        const std::string vocab_path = (fs::path(cfg.out_dir) / "vocab.txt").string();
        save_vocab(vocab, vocab_path);

        const TrainResult result = train(train_c, val_c, vocab, cfg.plan, cfg.model, cfg.train);
        std::printf("epoch,train_loss,val_loss,accuracy,precision,recall,f1\n");
        for (const EpochRecord& r : result.history) {
            std::printf("%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.epoch, r.train_loss, r.val_loss,
                        r.accuracy, r.precision, r.recall, r.f1);
        }
        write_file((fs::path(cfg.out_dir) / "history.csv").string(),
                   history_to_csv(result.history));

        Checkpoint ckpt;
        ckpt.config = result.model_config;
        ckpt.params = result.best_params;
        ckpt.seed = cfg.train.seed;
        ckpt.epoch = result.best_epoch;
        ckpt.vocab_path = "vocab.txt"; // relative to the checkpoint's directory
        ckpt.vocab_hash = vocab_fingerprint(vocab);
        ckpt.optimizer = result.best_optimizer;
        save_checkpoint(ckpt, (fs::path(cfg.out_dir) / "checkpoint.rose").string());

        const std::vector<EncodedSample> test_set = encode_corpus(test_c, vocab, cfg.plan);
        const EvalResult test_eval = evaluate(result.best_params, result.model_config, test_set);
        char note[256];
        std::snprintf(note, sizeof note,
                      "evaluated on the held-out test split; early stopping validated on the "
                      "holdout validation split (train/val/test = %.2f/%.2f/%.2f, seed %llu)",
                      cfg.f_train, cfg.f_val, cfg.f_test,
                      static_cast<unsigned long long>(cfg.train.seed));
        write_file((fs::path(cfg.out_dir) / "report.json").string(),
                   report_to_json(test_eval.report, note));
        std::printf("best epoch %d; test accuracy %.6f macro-F1 %.6f\n", result.best_epoch,
                    test_eval.report.accuracy, test_eval.report.macro_f1);
        return kExitOk;
    } catch (const Error& e) {
        std::fprintf(stderr, "training error: %s\n", e.what());
        return kExitTrainError;
    }
}

int run_search(const RunConfig& cfg) {
    Corpus corpus, train_c, val_c, test_c;
    try {
        corpus = load_tsv(cfg.corpus_path);
        if (cfg.balance) {
            corpus = balance_undersample(corpus, cfg.train.seed);
        }
        std::tie(train_c, val_c, test_c) =
            split_train_val_test(corpus, cfg.f_train, cfg.f_val, cfg.f_test, cfg.train.seed);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    }
    try {
        fs::create_directories(cfg.out_dir);
        const Vocab vocab = build_vocab(train_c, cfg.vocab_cap);
        auto [best, trials] = random_search(cfg.search, cfg.train.seed, train_c, val_c, vocab,
                                            cfg.plan, cfg.model, cfg.train);
        write_file((fs::path(cfg.out_dir) / "search.json").string(), search_to_json(trials));

        std::vector<SearchTrial> board = trials;
        std::stable_sort(board.begin(), board.end(),
                         [](const SearchTrial& a, const SearchTrial& b) {
                             return a.best_f1 > b.best_f1;
                         });
        write_file((fs::path(cfg.out_dir) / "leaderboard.json").string(), search_to_json(board));
        std::printf("lr,batch,weight_decay,best_f1,best_epoch\n");
        for (const SearchTrial& t : board) {
            std::printf("%.6f,%d,%.6f,%.6f,%d\n", t.config.learning_rate, t.config.batch_size,
                        t.config.weight_decay, t.best_f1, t.best_epoch);
        }
        std::printf("winner: lr %.6f batch %d weight_decay %.6f\n", best.learning_rate,
                    best.batch_size, best.weight_decay);
        return kExitOk;
    } catch (const Error& e) {
        std::fprintf(stderr, "search error: %s\n", e.what());
        return kExitTrainError;
    }
}

int run_eval(const RunConfig& cfg) {
    LoadedModel lm;
    try {
        lm = load_model(cfg);
    } catch (const Error& e) {
        std::fprintf(stderr, "model error: %s\n", e.what());
        return kExitModelError;
    }
    try {
        const Corpus corpus = load_tsv(cfg.corpus_path);
        if (corpus.empty()) {
            std::fprintf(stderr, "error: empty corpus\n");
            return kExitInputError;
        }
        const std::vector<EncodedSample> samples = encode_corpus(corpus, lm.vocab, cfg.plan);
        const EvalResult res = evaluate(lm.ckpt.params, lm.ckpt.config, samples);
        fs::create_directories(cfg.out_dir);
        write_file((fs::path(cfg.out_dir) / "report.json").string(),
                   report_to_json(res.report));
        write_file((fs::path(cfg.out_dir) / "matrix.csv").string(),
                   matrix_to_csv(res.report.matrix));
        std::printf("%s", report_to_json(res.report).c_str());
        return kExitOk;
    } catch (const TsvError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    } catch (const Error& e) {
        std::fprintf(stderr, "model error: %s\n", e.what());
        return kExitModelError;
    }
}

int run_kfold(const RunConfig& cfg) {
    Corpus corpus;
    FoldAssignment folds;
    try {
        corpus = load_tsv(cfg.corpus_path);
        if (cfg.balance) {
            corpus = balance_undersample(corpus, cfg.train.seed);
        }
        folds = cfg.group_by_project ? kfold_split_by_project(corpus, cfg.k_folds, cfg.train.seed)
                                     : kfold_split(corpus, cfg.k_folds, cfg.train.seed);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    }
    try {
        fs::create_directories(cfg.out_dir);
        std::vector<Report> reports;
        for (int fold = 0; fold < cfg.k_folds; ++fold) {
            const Corpus train_c = subset(corpus, folds.complement_indices(fold));
            const Corpus held_out = subset(corpus, folds.fold_indices(fold));
            TrainConfig tc = cfg.train;
            tc.seed = cfg.train.seed + static_cast<uint64_t>(fold);
            const Vocab vocab = build_vocab(train_c, cfg.vocab_cap);
            // The held-out fold doubles as the per-epoch validation set; the
            // aggregate JSON records that choice.
            const TrainResult result = train(train_c, held_out, vocab, cfg.plan, cfg.model, tc);
            const std::vector<EncodedSample> eval_set = encode_corpus(held_out, vocab, cfg.plan);
            const EvalResult res = evaluate(result.best_params, result.model_config, eval_set);
            reports.push_back(res.report);
            write_file((fs::path(cfg.out_dir) / ("fold_" + std::to_string(fold) + ".json"))
                           .string(),
                       report_to_json(res.report));
            std::printf("fold %d: accuracy %.6f macro-F1 %.6f\n", fold, res.report.accuracy,
                        res.report.macro_f1);
        }
        const KFoldAggregate agg = kfold_evaluate(reports);
        write_file((fs::path(cfg.out_dir) / "kfold.json").string(),
                   kfold_to_json(agg, "held_out_fold"));
        std::printf("mean accuracy %.6f (std %.6f), mean macro-F1 %.6f (std %.6f)\n",
                    agg.accuracy.mean, agg.accuracy.stddev, agg.macro_f1.mean,
                    agg.macro_f1.stddev);
        return kExitOk;
    } catch (const Error& e) {
        std::fprintf(stderr, "kfold error: %s\n", e.what());
        return kExitTrainError;
    }
}

int run_predict(const RunConfig& cfg, const std::string& code_path,
                const std::optional<std::string>& smell) {
    LoadedModel lm;
    std::string code;
    try {
        lm = load_model(cfg);
        code = read_file(code_path);
    } catch (const Error& e) {
        std::fprintf(stderr, "model error: %s\n", e.what());
        return kExitModelError;
    }
    std::optional<SmellKind> smell_kind;
    if (smell) {
        smell_kind = parse_smell(*smell);
        if (!smell_kind) {
            std::fprintf(stderr, "error: unknown smell '%s'\n", smell->c_str());
            return kExitInputError;
        }
    }
    try {
        const Prediction pred =
            classify(lm.ckpt.params, lm.ckpt.config, lm.vocab, cfg.plan, code);
        std::ostringstream os;
        os << "{";
        if (smell_kind) {
            const RefactoringLabel expected = smell_to_refactoring(*smell_kind);
            os << "\"agrees\":" << (expected == pred.label ? "true" : "false") << ",";
        }
        os << "\"predicted_label\":\"" << label_name(pred.label) << "\"";
        os << ",\"probabilities\":[";
        char buf[32];
        for (int c = 0; c < 3; ++c) {
            std::snprintf(buf, sizeof buf, "%s%.6f", c ? "," : "", pred.probabilities[c]);
            os << buf;
        }
        os << "]";
        if (smell_kind) {
            os << ",\"smell_expected_label\":\""
               << label_name(smell_to_refactoring(*smell_kind)) << "\"";
        }
        os << "}\n";
        std::printf("%s", os.str().c_str());
        return kExitOk;
    } catch (const Error& e) {
        std::fprintf(stderr, "model error: %s\n", e.what());
        return kExitModelError;
    }
}

} // namespace rose::cli
