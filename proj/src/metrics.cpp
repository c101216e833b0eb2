// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include "rose/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "rose/errors.hpp"

namespace rose {

int64_t ConfusionMatrix::total() const {
    int64_t t = 0;
    for (const auto& row : m) {
        for (int64_t x : row) {
            t += x;
        }
    }
    return t;
}

int64_t ConfusionMatrix::trace() const {
    int64_t t = 0;
    for (int c = 0; c < kNumClasses; ++c) {
        t += m[c][c];
    }
    return t;
}

int64_t ConfusionMatrix::row_sum(int r) const {
    int64_t t = 0;
    for (int64_t x : m[r]) {
        t += x;
    }
    return t;
}

int64_t ConfusionMatrix::col_sum(int c) const {
    int64_t t = 0;
    for (int r = 0; r < kNumClasses; ++r) {
        t += m[r][c];
    }
    return t;
}

ConfusionMatrix confusion(std::span<const RefactoringLabel> truths,
                          std::span<const RefactoringLabel> preds) {
    if (truths.size() != preds.size() || truths.empty()) {
        throw LengthMismatchError("truth/prediction lists must be non-empty and equally long");
    }
    ConfusionMatrix cm;
    for (size_t i = 0; i < truths.size(); ++i) {
        ++cm.m[static_cast<int>(truths[i])][static_cast<int>(preds[i])];
    }
    return cm;
}

std::array<ClassMetrics, kNumClasses> per_class(const ConfusionMatrix& matrix) {
    std::array<ClassMetrics, kNumClasses> out{};
    for (int c = 0; c < kNumClasses; ++c) {
        const double tp = static_cast<double>(matrix.m[c][c]);
        const int64_t col = matrix.col_sum(c);
        const int64_t row = matrix.row_sum(c);
        ClassMetrics& cm = out[c];
        cm.precision = col == 0 ? 0.0 : tp / static_cast<double>(col);
        cm.recall = row == 0 ? 0.0 : tp / static_cast<double>(row);
        cm.f1 = (cm.precision + cm.recall) == 0.0
                    ? 0.0
                    : 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
    }
    return out;
}

Report summarize(const ConfusionMatrix& matrix) {
    const int64_t total = matrix.total();
    if (total == 0) {
        throw EmptyMatrixError("confusion matrix has no counts");
    }
    Report r;
    r.matrix = matrix;
    r.per_class = per_class(matrix);
    const int64_t trace = matrix.trace();
    r.accuracy = static_cast<double>(trace) / static_cast<double>(total);
    r.macro_precision =
        (r.per_class[0].precision + r.per_class[1].precision + r.per_class[2].precision) /
        kNumClasses;
    r.macro_recall =
        (r.per_class[0].recall + r.per_class[1].recall + r.per_class[2].recall) / kNumClasses;
    r.macro_f1 = (r.per_class[0].f1 + r.per_class[1].f1 + r.per_class[2].f1) / kNumClasses;
    // Single-label multi-class: micro precision == recall == accuracy, and
    // the FP and FN totals are both the off-diagonal count.
    r.micro_precision = r.accuracy;
    r.micro_recall = r.accuracy;
    r.micro_f1 = r.accuracy;
    for (int c = 0; c < kNumClasses; ++c) {
        const double support = static_cast<double>(matrix.row_sum(c));
        const double w = support / static_cast<double>(total);
        r.weighted_precision += w * r.per_class[c].precision;
        r.weighted_recall += w * r.per_class[c].recall;
        r.weighted_f1 += w * r.per_class[c].f1;
    }
    r.fp_total = total - trace;
    r.fn_total = total - trace;
    return r;
}

KFoldAggregate kfold_evaluate(const std::vector<Report>& fold_reports) {
    if (fold_reports.size() < 2) {
        throw TooFewFoldsError("k-fold aggregation needs at least two folds");
    }
    const double n = static_cast<double>(fold_reports.size());
    auto stat = [&](auto field) {
        MetricStat s;
        for (const Report& r : fold_reports) {
            s.mean += field(r);
        }
        s.mean /= n;
        double ss = 0.0;
        for (const Report& r : fold_reports) {
            const double d = field(r) - s.mean;
            ss += d * d;
        }
        s.stddev = std::sqrt(ss / (n - 1.0)); // sample standard deviation
        return s;
    };
    KFoldAggregate agg;
    agg.folds = static_cast<int>(fold_reports.size());
    agg.accuracy = stat([](const Report& r) { return r.accuracy; });
    agg.macro_precision = stat([](const Report& r) { return r.macro_precision; });
    agg.macro_recall = stat([](const Report& r) { return r.macro_recall; });
    agg.macro_f1 = stat([](const Report& r) { return r.macro_f1; });
    for (const Report& r : fold_reports) {
        for (int i = 0; i < kNumClasses; ++i) {
            for (int j = 0; j < kNumClasses; ++j) {
                agg.pooled_matrix.m[i][j] += r.matrix.m[i][j];
            }
        }
    }
    agg.pooled_report = summarize(agg.pooled_matrix);
    return agg;
}

namespace {

std::string fixed6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\t':
            out += "\\t";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string matrix_json(const ConfusionMatrix& m) {
    std::string out = "[";
    for (int i = 0; i < kNumClasses; ++i) {
        out += i ? ",[" : "[";
        for (int j = 0; j < kNumClasses; ++j) {
            out += (j ? "," : "") + std::to_string(m.m[i][j]);
        }
        out += "]";
    }
    out += "]";
    return out;
}

// Keys stay sorted and floats fixed at six decimals so report bytes are
// reproducible run to run.
std::string report_body(const Report& r, const std::string& note) {
    std::ostringstream os;
    os << "{";
    os << "\"accuracy\":" << fixed6(r.accuracy);
    os << ",\"fn_total\":" << r.fn_total;
    os << ",\"fp_total\":" << r.fp_total;
    os << ",\"macro_f1\":" << fixed6(r.macro_f1);
    os << ",\"macro_precision\":" << fixed6(r.macro_precision);
    os << ",\"macro_recall\":" << fixed6(r.macro_recall);
    os << ",\"matrix\":" << matrix_json(r.matrix);
    os << ",\"micro_f1\":" << fixed6(r.micro_f1);
    os << ",\"micro_precision\":" << fixed6(r.micro_precision);
    os << ",\"micro_recall\":" << fixed6(r.micro_recall);
    if (!note.empty()) {
        os << ",\"note\":\"" << json_escape(note) << "\"";
    }
    os << ",\"per_class\":[";
    for (int c = 0; c < kNumClasses; ++c) {
        if (c) {
            os << ",";
        }
        os << "{\"f1\":" << fixed6(r.per_class[c].f1)
           << ",\"label\":\"" << label_name(kAllLabels[c]) << "\""
           << ",\"precision\":" << fixed6(r.per_class[c].precision)
           << ",\"recall\":" << fixed6(r.per_class[c].recall) << "}";
    }
    os << "]";
    os << ",\"weighted_f1\":" << fixed6(r.weighted_f1);
    os << ",\"weighted_precision\":" << fixed6(r.weighted_precision);
    os << ",\"weighted_recall\":" << fixed6(r.weighted_recall);
    os << "}";
    return os.str();
}

} // namespace

std::string report_to_json(const Report& report, const std::string& note) {
    return report_body(report, note) + "\n";
}

std::string kfold_to_json(const KFoldAggregate& agg, const std::string& validation_source) {
    std::ostringstream os;
    auto stat = [&](const char* name, const MetricStat& s, bool first = false) {
        os << (first ? "" : ",") << "\"" << name << "\":{\"mean\":" << fixed6(s.mean)
           << ",\"std\":" << fixed6(s.stddev) << "}";
    };
    os << "{";
    stat("accuracy", agg.accuracy, true);
    os << ",\"folds\":" << agg.folds;
    stat("macro_f1", agg.macro_f1);
    stat("macro_precision", agg.macro_precision);
    stat("macro_recall", agg.macro_recall);
    os << ",\"pooled\":" << report_body(agg.pooled_report, "");
    os << ",\"validation_source\":\"" << json_escape(validation_source) << "\"";
    os << "}\n";
    return os.str();
}

std::string matrix_to_csv(const ConfusionMatrix& matrix) {
    std::ostringstream os;
    os << "true\\pred";
    for (RefactoringLabel l : kAllLabels) {
        os << "," << label_name(l);
    }
    os << "\n";
    for (int i = 0; i < kNumClasses; ++i) {
        os << label_name(kAllLabels[i]);
        for (int j = 0; j < kNumClasses; ++j) {
            os << "," << matrix.m[i][j];
        }
        os << "\n";
    }
    return os.str();
}

} // namespace rose
