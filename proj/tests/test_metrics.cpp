// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rose/errors.hpp"
#include "rose/metrics.hpp"
#include "rose/reference_results.hpp"
#include "rose/tensor.hpp"

using namespace rose;

TEST_CASE("confusion counts true/predicted pairs") {
    const std::vector<RefactoringLabel> truths = {
        RefactoringLabel::ExtractMethod, RefactoringLabel::MoveClass,
        RefactoringLabel::PullUpMethod, RefactoringLabel::ExtractMethod};
    const std::vector<RefactoringLabel> all_right = truths;
    ConfusionMatrix cm = confusion(truths, all_right);
    CHECK(cm.trace() == 4);
    CHECK(cm.total() == 4);
    CHECK(cm.m[0][0] == 2);

    const std::vector<RefactoringLabel> one_t = {RefactoringLabel::ExtractMethod};
    const std::vector<RefactoringLabel> one_p = {RefactoringLabel::MoveClass};
    cm = confusion(one_t, one_p);
    CHECK(cm.m[0][1] == 1);
    CHECK(cm.trace() == 0);

    // row sums are per-class true counts
    cm = confusion(truths, std::vector<RefactoringLabel>{
                               RefactoringLabel::MoveClass, RefactoringLabel::MoveClass,
                               RefactoringLabel::ExtractMethod, RefactoringLabel::PullUpMethod});
    CHECK(cm.row_sum(0) == 2);
    CHECK(cm.row_sum(1) == 1);
    CHECK(cm.row_sum(2) == 1);

    CHECK_THROWS_AS(confusion(truths, one_p), LengthMismatchError);
    CHECK_THROWS_AS(confusion(std::vector<RefactoringLabel>{}, std::vector<RefactoringLabel>{}),
                    LengthMismatchError);
}

TEST_CASE("per_class reproduces the published CodeBERT figures") {
    const auto pc = per_class(reference::codebert_matrix());
    CHECK(pc[0].precision == doctest::Approx(0.8212).epsilon(1e-3));
    CHECK(pc[0].recall == doctest::Approx(0.8018).epsilon(1e-3));
    CHECK(pc[1].precision == doctest::Approx(0.8406).epsilon(1e-3));
    CHECK(pc[1].recall == doctest::Approx(0.8487).epsilon(1e-3));
    CHECK(pc[2].precision == doctest::Approx(0.8945).epsilon(1e-3));
    CHECK(pc[2].recall == doctest::Approx(0.9069).epsilon(1e-3));
}

TEST_CASE("per_class reproduces the published CodeT5 PullUp figures") {
    const auto pc = per_class(reference::codet5_matrix());
    CHECK(pc[2].precision == doctest::Approx(0.9724).epsilon(1e-3));
    CHECK(pc[2].recall == doctest::Approx(0.9739).epsilon(1e-3));
}

TEST_CASE("per_class on a diagonal matrix is all ones") {
    ConfusionMatrix cm;
    cm.m = {{{5, 0, 0}, {0, 5, 0}, {0, 0, 5}}};
    for (const ClassMetrics& c : per_class(cm)) {
        CHECK(c.precision == 1.0);
        CHECK(c.recall == 1.0);
        CHECK(c.f1 == 1.0);
    }
}

TEST_CASE("per_class zero-denominator convention") {
    ConfusionMatrix cm;
    cm.m = {{{3, 0, 0}, {2, 0, 0}, {0, 0, 1}}}; // nothing predicted/true for some classes
    const auto pc = per_class(cm);
    CHECK(pc[1].precision == 0.0); // no column mass
    CHECK(pc[1].recall == 0.0);
    CHECK(pc[1].f1 == 0.0);
}

TEST_CASE("summarize: FP and FN totals are the off-diagonal count") {
    const Report bert = summarize(reference::codebert_matrix());
    CHECK(bert.fp_total == reference::kCodeBertOffDiagonal);
    CHECK(bert.fn_total == reference::kCodeBertOffDiagonal);

    const Report t5 = summarize(reference::codet5_matrix());
    CHECK(t5.fp_total == reference::kCodeT5OffDiagonal);
    CHECK(t5.fn_total == reference::kCodeT5OffDiagonal);
    CHECK(t5.accuracy == doctest::Approx(3809.0 / 3960.0).epsilon(1e-12));

    ConfusionMatrix perfect;
    perfect.m = {{{7, 0, 0}, {0, 7, 0}, {0, 0, 7}}};
    const Report r = summarize(perfect);
    CHECK(r.accuracy == 1.0);
    CHECK(r.macro_f1 == 1.0);
    CHECK(r.fp_total == 0);

    CHECK_THROWS_AS(summarize(ConfusionMatrix{}), EmptyMatrixError);
}

TEST_CASE("property: summarize matches the per-sample counting oracle exactly") {
    DetRng rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        const size_t n = 1 + rng.uniform_index(50);
        std::vector<RefactoringLabel> truths(n), preds(n);
        for (size_t i = 0; i < n; ++i) {
            truths[i] = static_cast<RefactoringLabel>(rng.uniform_index(3));
            preds[i] = static_cast<RefactoringLabel>(rng.uniform_index(3));
        }
        const Report got = summarize(confusion(truths, preds));
        const auto want = rose::oracle::count_metrics(truths, preds);
        CHECK(got.accuracy == want.accuracy);
        CHECK(got.macro_precision == want.macro_precision);
        CHECK(got.macro_recall == want.macro_recall);
        CHECK(got.macro_f1 == want.macro_f1);
        CHECK(got.fp_total == want.fp_total);
        CHECK(got.fn_total == want.fn_total);
        for (int c = 0; c < 3; ++c) {
            CHECK(got.per_class[c].precision == want.precision[c]);
            CHECK(got.per_class[c].recall == want.recall[c]);
            CHECK(got.per_class[c].f1 == want.f1[c]);
            for (int p = 0; p < 3; ++p) {
                CHECK(got.matrix.m[c][p] == want.matrix[c][p]);
            }
        }
        // macro F1 is bracketed by the per-class extremes
        const double mx = std::max({want.f1[0], want.f1[1], want.f1[2]});
        const double mn = std::min({want.f1[0], want.f1[1], want.f1[2]});
        CHECK(got.macro_f1 <= mx + 1e-15);
        CHECK(got.macro_f1 >= mn - 1e-15);
    }
}

TEST_CASE("property: per_class is equivariant under class relabeling") {
    DetRng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        ConfusionMatrix cm;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                cm.m[i][j] = static_cast<int64_t>(rng.uniform_index(40));
            }
        }
        std::array<int, 3> perm = {0, 1, 2};
        std::vector<int> p(perm.begin(), perm.end());
        rng.shuffle(p);
        ConfusionMatrix permuted;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                permuted.m[p[static_cast<size_t>(i)]][p[static_cast<size_t>(j)]] = cm.m[i][j];
            }
        }
        const auto base = per_class(cm);
        const auto moved = per_class(permuted);
        for (int c = 0; c < 3; ++c) {
            CHECK(moved[p[static_cast<size_t>(c)]].precision == base[c].precision);
            CHECK(moved[p[static_cast<size_t>(c)]].recall == base[c].recall);
            CHECK(moved[p[static_cast<size_t>(c)]].f1 == base[c].f1);
        }
    }
}

TEST_CASE("kfold_evaluate: means, sample std and pooled matrix") {
    ConfusionMatrix a;
    a.m = {{{4, 1, 0}, {0, 5, 0}, {0, 0, 5}}}; // accuracy 14/15
    ConfusionMatrix b;
    b.m = {{{5, 0, 0}, {0, 5, 0}, {0, 0, 5}}}; // accuracy 1.0
    const Report ra = summarize(a);
    const Report rb = summarize(b);

    const KFoldAggregate agg = kfold_evaluate({ra, rb});
    CHECK(agg.folds == 2);
    CHECK(agg.accuracy.mean == doctest::Approx((ra.accuracy + rb.accuracy) / 2).epsilon(1e-12));
    CHECK(agg.pooled_matrix.total() == 30);
    CHECK(agg.pooled_report.accuracy == doctest::Approx(29.0 / 30.0).epsilon(1e-12));

    // identical folds collapse to zero spread
    const KFoldAggregate same = kfold_evaluate({rb, rb, rb});
    CHECK(same.accuracy.mean == 1.0);
    CHECK(same.accuracy.stddev == 0.0);

    CHECK_THROWS_AS(kfold_evaluate({ra}), TooFewFoldsError);
}

TEST_CASE("kfold_evaluate hand-computed two-fold case: 0.8/1.0") {
    // Build two synthetic fold reports with accuracies 0.8 and 1.0.
    ConfusionMatrix a;
    a.m = {{{4, 1, 0}, {2, 3, 0}, {0, 0, 5}}}; // 12/15 = 0.8
    ConfusionMatrix b;
    b.m = {{{5, 0, 0}, {0, 5, 0}, {0, 0, 5}}};
    const Report ra = summarize(a);
    const Report rb = summarize(b);
    REQUIRE(ra.accuracy == doctest::Approx(0.8).epsilon(1e-12));
    REQUIRE(rb.accuracy == 1.0);
    const KFoldAggregate agg = kfold_evaluate({ra, rb});
    CHECK(agg.accuracy.mean == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(agg.accuracy.stddev == doctest::Approx(std::sqrt(0.02)).epsilon(1e-9)); // 0.141421
}

TEST_CASE("report JSON carries the fixed key set and optional note") {
    const Report r = summarize(reference::codet5_matrix());
    const std::string plain = report_to_json(r);
    for (const char* key :
         {"\"accuracy\":", "\"macro_precision\":", "\"macro_recall\":", "\"macro_f1\":",
          "\"per_class\":", "\"fp_total\":", "\"fn_total\":", "\"matrix\":"}) {
        CHECK(plain.find(key) != std::string::npos);
    }
    CHECK(plain.find("\"note\":") == std::string::npos);

    const std::string with_note = report_to_json(r, reference::codet5_provenance_note());
    CHECK(with_note.find("\"note\":") != std::string::npos);
    CHECK(with_note.find("0.961869") != std::string::npos);

    // byte determinism
    CHECK(report_to_json(r) == report_to_json(r));
}

TEST_CASE("matrix CSV has label headers") {
    const std::string csv = matrix_to_csv(reference::codebert_matrix());
    CHECK(csv.find("ExtractMethod,MoveClass,PullUpMethod") != std::string::npos);
    CHECK(csv.find("ExtractMethod,1052,166,94") != std::string::npos);
}
