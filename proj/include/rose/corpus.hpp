// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "rose/labels.hpp"

namespace rose {

/// One labeled code snippet. `project_id` is optional (empty = absent).
struct Sample {
    std::string code;
    RefactoringLabel label = RefactoringLabel::ExtractMethod;
    std::string project_id;

    bool operator==(const Sample&) const = default;
};

/// Ordered sample collection. The order is the on-disk order and is the
/// determinism anchor for every seeded operation downstream.
struct Corpus {
    std::vector<Sample> samples;

    std::array<long, kNumClasses> counts() const;
    size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

/// Stratified k-fold assignment: fold_of[i] is the fold of sample i.
struct FoldAssignment {
    int k = 0;
    std::vector<int> fold_of;

    std::vector<size_t> fold_indices(int fold) const;
    std::vector<size_t> complement_indices(int fold) const;
};

/// Reads a TSV corpus: `code<TAB>label[<TAB>project_id]`, UTF-8, LF line
/// endings, no header. Code fields are escaped (\t, \n, \\). Empty lines are
/// skipped. Throws TsvError with a 1-based line number on malformed input.
Corpus load_tsv(const std::string& path);

/// Inverse of load_tsv; writing then reading reproduces the corpus
/// field-for-field. Throws IoError on write failure.
void save_tsv(const Corpus& corpus, const std::string& path);

/// Escaping used by the TSV format, exposed for tests and tooling.
std::string escape_code(const std::string& raw);
std::string unescape_code(const std::string& escaped, long line_no);

/// Random undersampling: every class is cut down to the smallest class count
/// by a seeded uniform draw without replacement; surviving samples keep
/// their original relative order. Throws EmptyClassError if a class has no
/// samples.
Corpus balance_undersample(const Corpus& corpus, uint64_t seed);

/// Stratified train/val/test split. Fractions must be positive and sum to 1
/// (within 1e-9). Deterministic given the seed.
std::tuple<Corpus, Corpus, Corpus> split_train_val_test(
    const Corpus& corpus, double f_train, double f_val, double f_test, uint64_t seed);

/// Stratified k-fold assignment; per-label fold sizes differ by at most one.
/// Requires k >= 2 and at least k samples of every label.
FoldAssignment kfold_split(const Corpus& corpus, int k, uint64_t seed);

/// Group-aware variant: samples sharing a project_id always land in the same
/// fold (samples without a project are dealt individually). Stratification is
/// best-effort only.
FoldAssignment kfold_split_by_project(const Corpus& corpus, int k, uint64_t seed);

/// Subset view materialized as a corpus, preserving the given index order.
Corpus subset(const Corpus& corpus, const std::vector<size_t>& indices);

} // namespace rose
