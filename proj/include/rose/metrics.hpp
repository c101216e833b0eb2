// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rose/labels.hpp"

namespace rose {

/// 3x3 counts, rows = true label, columns = predicted label.
struct ConfusionMatrix {
    std::array<std::array<int64_t, kNumClasses>, kNumClasses> m{};

    int64_t total() const;
    int64_t trace() const;
    int64_t row_sum(int r) const;
    int64_t col_sum(int c) const;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Everything reported per evaluation: accuracy, macro/micro/weighted
/// averages, per-class metrics, FP/FN totals, and the matrix itself. In
/// single-label multi-class classification the FP and FN totals are both the
/// off-diagonal count.
struct Report {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double micro_precision = 0.0;
    double micro_recall = 0.0;
    double micro_f1 = 0.0;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
    std::array<ClassMetrics, kNumClasses> per_class{};
    int64_t fp_total = 0;
    int64_t fn_total = 0;
    ConfusionMatrix matrix;
};

/// Counts true/predicted pairs. Throws LengthMismatchError when the lists
/// differ in length or are empty.
ConfusionMatrix confusion(std::span<const RefactoringLabel> truths,
                          std::span<const RefactoringLabel> preds);

/// precision_c = M[c][c] / column sum, recall_c = M[c][c] / row sum, f1 the
/// harmonic mean; all 0 when the denominator is 0.
std::array<ClassMetrics, kNumClasses> per_class(const ConfusionMatrix& matrix);

/// Full report; macro metrics are unweighted class means. Throws
/// EmptyMatrixError on a zero-count matrix.
Report summarize(const ConfusionMatrix& matrix);

/// Mean and sample standard deviation of each scalar metric across folds,
/// plus the pooled (entry-wise summed) matrix and its own report. Requires
/// at least two folds.
struct MetricStat {
    double mean = 0.0;
    double stddev = 0.0;
};

struct KFoldAggregate {
    int folds = 0;
    MetricStat accuracy;
    MetricStat macro_precision;
    MetricStat macro_recall;
    MetricStat macro_f1;
    ConfusionMatrix pooled_matrix;
    Report pooled_report;
};

KFoldAggregate kfold_evaluate(const std::vector<Report>& fold_reports);

/// Deterministic JSON: sorted keys, 6-decimal fixed floats. `note` adds a
/// provenance annotation when the report derives from published reference
/// counts rather than a live evaluation.
std::string report_to_json(const Report& report, const std::string& note = "");

std::string kfold_to_json(const KFoldAggregate& agg, const std::string& validation_source);

/// CSV with a header row/column of label names.
std::string matrix_to_csv(const ConfusionMatrix& matrix);

} // namespace rose
