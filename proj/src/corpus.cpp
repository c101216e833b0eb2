// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include "rose/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rose/errors.hpp"
#include "rose/tensor.hpp"

namespace rose {

namespace {

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t\r") == std::string::npos;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::array<long, kNumClasses> Corpus::counts() const {
    std::array<long, kNumClasses> c{};
    for (const Sample& s : samples) {
        ++c[static_cast<int>(s.label)];
    }
    return c;
}

std::vector<size_t> FoldAssignment::fold_indices(int fold) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] == fold) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<size_t> FoldAssignment::complement_indices(int fold) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] != fold) {
            out.push_back(i);
        }
    }
    return out;
}

std::string escape_code(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
        case '\\':
            out += "\\\\";
            break;
        case '\t':
            out += "\\t";
            break;
        case '\n':
            out += "\\n";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string unescape_code(const std::string& escaped, long line_no) {
    std::string out;
    out.reserve(escaped.size());
    for (size_t i = 0; i < escaped.size(); ++i) {
        char c = escaped[i];
        if (c != '\\') {
            out += c;
            continue;
        }
        if (i + 1 >= escaped.size()) {
            throw TsvError(TsvError::Kind::MalformedRow, line_no,
                           "line " + std::to_string(line_no) + ": dangling escape");
        }
        char n = escaped[++i];
        switch (n) {
        case '\\':
            out += '\\';
            break;
        case 't':
            out += '\t';
            break;
        case 'n':
            out += '\n';
            break;
        default:
            throw TsvError(TsvError::Kind::MalformedRow, line_no,
                           "line " + std::to_string(line_no) + ": unknown escape \\" +
                               std::string(1, n));
        }
    }
    return out;
}

Corpus load_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    Corpus corpus;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back(); // tolerate CRLF input
        }
        if (line.empty() || is_blank(line)) {
            continue;
        }
        std::vector<std::string> fields;
        size_t start = 0;
        while (true) {
            size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (fields.size() < 2 || fields.size() > 3) {
            throw TsvError(TsvError::Kind::MalformedRow, line_no,
                           "line " + std::to_string(line_no) + ": expected 2 or 3 fields, got " +
                               std::to_string(fields.size()));
        }
        Sample s;
        s.code = unescape_code(fields[0], line_no);
        if (trim(s.code).empty()) {
            throw TsvError(TsvError::Kind::EmptyCode, line_no,
                           "line " + std::to_string(line_no) + ": empty code");
        }
        auto label = parse_label(fields[1]);
        if (!label) {
            throw TsvError(TsvError::Kind::UnknownLabel, line_no,
                           "line " + std::to_string(line_no) + ": unknown label '" + fields[1] +
                               "'");
        }
        s.label = *label;
        if (fields.size() == 3) {
            s.project_id = unescape_code(fields[2], line_no);
        }
        corpus.samples.push_back(std::move(s));
    }
    return corpus;
}

void save_tsv(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    for (const Sample& s : corpus.samples) {
        out << escape_code(s.code) << '\t' << label_name(s.label);
        if (!s.project_id.empty()) {
            out << '\t' << escape_code(s.project_id);
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path);
    }
}

Corpus subset(const Corpus& corpus, const std::vector<size_t>& indices) {
    Corpus out;
    out.samples.reserve(indices.size());
    for (size_t i : indices) {
        out.samples.push_back(corpus.samples[i]);
    }
    return out;
}

namespace {

std::array<std::vector<size_t>, kNumClasses> indices_by_label(const Corpus& corpus) {
    std::array<std::vector<size_t>, kNumClasses> by_label;
    for (size_t i = 0; i < corpus.samples.size(); ++i) {
        by_label[static_cast<int>(corpus.samples[i].label)].push_back(i);
    }
    return by_label;
}

} // namespace

Corpus balance_undersample(const Corpus& corpus, uint64_t seed) {
    auto by_label = indices_by_label(corpus);
    long min_count = -1;
    for (int c = 0; c < kNumClasses; ++c) {
        if (by_label[c].empty()) {
            throw EmptyClassError("class " + std::string(label_name(kAllLabels[c])) +
                                  " has no samples");
        }
        long n = static_cast<long>(by_label[c].size());
        min_count = min_count < 0 ? n : std::min(min_count, n);
    }
    DetRng rng(seed);
    std::vector<size_t> kept;
    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<size_t> pool = by_label[c];
        rng.shuffle(pool);
        pool.resize(static_cast<size_t>(min_count));
        kept.insert(kept.end(), pool.begin(), pool.end());
    }
    std::sort(kept.begin(), kept.end()); // original relative order
    return subset(corpus, kept);
}

std::tuple<Corpus, Corpus, Corpus> split_train_val_test(const Corpus& corpus, double f_train,
                                                        double f_val, double f_test,
                                                        uint64_t seed) {
    if (f_train <= 0.0 || f_val <= 0.0 || f_test <= 0.0) {
        throw FractionSumError("split fractions must be positive");
    }
    if (std::fabs(f_train + f_val + f_test - 1.0) > 1e-9) {
        throw FractionSumError("split fractions must sum to 1");
    }
    auto by_label = indices_by_label(corpus);
    DetRng rng(seed);
    std::vector<size_t> train_idx, val_idx, test_idx;
    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<size_t> pool = by_label[c];
        rng.shuffle(pool);
        const long n = static_cast<long>(pool.size());
        const long n_train = static_cast<long>(std::floor(f_train * static_cast<double>(n)));
        const long n_val = static_cast<long>(std::floor(f_val * static_cast<double>(n)));
        const long n_test = n - n_train - n_val;
        if (n_train < 1 || n_val < 1 || n_test < 1) {
            throw ClassTooSmallError("class " + std::string(label_name(kAllLabels[c])) +
                                     " too small for the requested split");
        }
        for (long i = 0; i < n; ++i) {
            if (i < n_train) {
                train_idx.push_back(pool[i]);
            } else if (i < n_train + n_val) {
                val_idx.push_back(pool[i]);
            } else {
                test_idx.push_back(pool[i]);
            }
        }
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(val_idx.begin(), val_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {subset(corpus, train_idx), subset(corpus, val_idx), subset(corpus, test_idx)};
}

FoldAssignment kfold_split(const Corpus& corpus, int k, uint64_t seed) {
    if (k < 2) {
        throw ClassTooSmallError("k must be at least 2");
    }
    auto by_label = indices_by_label(corpus);
    for (int c = 0; c < kNumClasses; ++c) {
        if (static_cast<long>(by_label[c].size()) < k) {
            throw ClassTooSmallError("class " + std::string(label_name(kAllLabels[c])) +
                                     " has fewer than k samples");
        }
    }
    DetRng rng(seed);
    FoldAssignment fa;
    fa.k = k;
    fa.fold_of.assign(corpus.samples.size(), -1);
    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<size_t> pool = by_label[c];
        rng.shuffle(pool);
        for (size_t t = 0; t < pool.size(); ++t) {
            fa.fold_of[pool[t]] = static_cast<int>(t % static_cast<size_t>(k));
        }
    }
    return fa;
}

FoldAssignment kfold_split_by_project(const Corpus& corpus, int k, uint64_t seed) {
    if (k < 2) {
        throw ClassTooSmallError("k must be at least 2");
    }
    // Distinct projects in first-appearance order, then shuffled and dealt
    // round-robin; loose samples are dealt after the projects.
    std::vector<std::string> projects;
    std::map<std::string, std::vector<size_t>> project_samples;
    std::vector<size_t> loose;
    for (size_t i = 0; i < corpus.samples.size(); ++i) {
        const std::string& p = corpus.samples[i].project_id;
        if (p.empty()) {
            loose.push_back(i);
            continue;
        }
        auto [it, inserted] = project_samples.try_emplace(p);
        if (inserted) {
            projects.push_back(p);
        }
        it->second.push_back(i);
    }
    if (projects.size() + loose.size() < static_cast<size_t>(k)) {
        throw ClassTooSmallError("fewer groups than folds");
    }
    DetRng rng(seed);
    rng.shuffle(projects);
    rng.shuffle(loose);
    FoldAssignment fa;
    fa.k = k;
    fa.fold_of.assign(corpus.samples.size(), -1);
    int next = 0;
    for (const std::string& p : projects) {
        for (size_t i : project_samples[p]) {
            fa.fold_of[i] = next;
        }
        next = (next + 1) % k;
    }
    for (size_t i : loose) {
        fa.fold_of[i] = next;
        next = (next + 1) % k;
    }
    return fa;
}

} // namespace rose
