// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "rose/corpus.hpp"
#include "rose/errors.hpp"
#include "rose/tensor.hpp"

using namespace rose;

namespace {

std::string temp_path(const char* name) {
    static int counter = 0;
    return (std::filesystem::temp_directory_path() /
            (std::string("rose_corpus_") + name + std::to_string(counter++) + ".tsv"))
        .string();
}

void write_raw(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

Corpus make_corpus(std::initializer_list<std::pair<const char*, RefactoringLabel>> rows) {
    Corpus c;
    for (const auto& [code, label] : rows) {
        c.samples.push_back(Sample{code, label, ""});
    }
    return c;
}

Corpus random_corpus(DetRng& rng, long n) {
    Corpus c;
    for (long i = 0; i < n; ++i) {
        c.samples.push_back(Sample{"int x" + std::to_string(i) + ";",
                                   static_cast<RefactoringLabel>(rng.uniform_index(3)), ""});
    }
    return c;
}

} // namespace

TEST_CASE("smell_to_refactoring is the canonical total mapping") {
    CHECK(smell_to_refactoring(SmellKind::GodClass) == RefactoringLabel::ExtractMethod);
    CHECK(smell_to_refactoring(SmellKind::CyclicDependency) == RefactoringLabel::MoveClass);
    CHECK(smell_to_refactoring(SmellKind::HubLikeDependency) == RefactoringLabel::PullUpMethod);
}

TEST_CASE("load_tsv parses rows and preserves order") {
    const std::string path = temp_path("load");
    write_raw(path, "int f(){}\tExtractMethod\nclass A {}\tMoveClass\tprojA\n");
    const Corpus c = load_tsv(path);
    REQUIRE(c.size() == 2);
    CHECK(c.samples[0].code == "int f(){}");
    CHECK(c.samples[0].label == RefactoringLabel::ExtractMethod);
    CHECK(c.samples[0].project_id.empty());
    CHECK(c.samples[1].project_id == "projA");
    std::remove(path.c_str());
}

TEST_CASE("load_tsv counts per label") {
    const std::string path = temp_path("counts");
    write_raw(path, "a;\tExtractMethod\nb;\tExtractMethod\nc;\tMoveClass\nd;\tMoveClass\n"
                    "e;\tPullUpMethod\nf;\tPullUpMethod\n");
    const Corpus c = load_tsv(path);
    CHECK(c.counts() == std::array<long, 3>{2, 2, 2});
    std::remove(path.c_str());
}

TEST_CASE("load_tsv rejects unknown labels with the line number") {
    const std::string path = temp_path("unknown");
    write_raw(path, "int f(){}\tExtractMethod\nint g(){}\tRename Variable\n");
    try {
        load_tsv(path);
        FAIL("expected UnknownLabel");
    } catch (const TsvError& e) {
        CHECK(e.kind == TsvError::Kind::UnknownLabel);
        CHECK(e.line == 2);
    }
    std::remove(path.c_str());
}

TEST_CASE("load_tsv rejects malformed and empty-code rows") {
    const std::string path = temp_path("malformed");
    write_raw(path, "just one field\n");
    CHECK_THROWS_AS(load_tsv(path), TsvError);

    write_raw(path, "   \tExtractMethod\n");
    try {
        load_tsv(path);
        FAIL("expected EmptyCode");
    } catch (const TsvError& e) {
        CHECK(e.kind == TsvError::Kind::EmptyCode);
        CHECK(e.line == 1);
    }
    std::remove(path.c_str());
}

TEST_CASE("load_tsv accepts spaced label aliases") {
    const std::string path = temp_path("alias");
    write_raw(path, "x;\tExtract Method\ny;\tPull Up Method\n");
    const Corpus c = load_tsv(path);
    CHECK(c.samples[0].label == RefactoringLabel::ExtractMethod);
    CHECK(c.samples[1].label == RefactoringLabel::PullUpMethod);
    std::remove(path.c_str());
}

TEST_CASE("save/load round trip with tabs, newlines and backslashes") {
    Corpus c;
    c.samples.push_back(Sample{"if (a)\n\treturn \"x\\\\y\";", RefactoringLabel::MoveClass, "p1"});
    c.samples.push_back(Sample{"int f() { return 1; }", RefactoringLabel::ExtractMethod, ""});
    const std::string path = temp_path("roundtrip");
    save_tsv(c, path);
    const Corpus back = load_tsv(path);
    REQUIRE(back.size() == c.size());
    CHECK(back.samples[0] == c.samples[0]);
    CHECK(back.samples[1] == c.samples[1]);
    std::remove(path.c_str());
}

TEST_CASE("empty corpus round trips to an empty file") {
    const std::string path = temp_path("empty");
    save_tsv(Corpus{}, path);
    CHECK(load_tsv(path).empty());
    std::remove(path.c_str());
}

TEST_CASE("escape/unescape are inverse on every byte") {
    std::string raw;
    for (int b = 1; b < 256; ++b) {
        raw += static_cast<char>(b);
    }
    CHECK(unescape_code(escape_code(raw), 1) == raw);
    CHECK(escape_code("a\tb").find('\t') == std::string::npos);
}

TEST_CASE("balance_undersample cuts every class to the minimum") {
    Corpus c;
    for (int i = 0; i < 10; ++i) {
        c.samples.push_back(Sample{"a" + std::to_string(i), RefactoringLabel::ExtractMethod, ""});
    }
    for (int i = 0; i < 7; ++i) {
        c.samples.push_back(Sample{"b" + std::to_string(i), RefactoringLabel::MoveClass, ""});
    }
    for (int i = 0; i < 5; ++i) {
        c.samples.push_back(Sample{"c" + std::to_string(i), RefactoringLabel::PullUpMethod, ""});
    }
    const Corpus balanced = balance_undersample(c, 42);
    CHECK(balanced.counts() == std::array<long, 3>{5, 5, 5});

    // kept samples form a subset in original relative order
    size_t cursor = 0;
    for (const Sample& s : balanced.samples) {
        bool found = false;
        while (cursor < c.samples.size()) {
            if (c.samples[cursor++] == s) {
                found = true;
                break;
            }
        }
        CHECK(found);
    }

    // determinism and identity on already balanced input
    CHECK(balance_undersample(c, 42).samples == balanced.samples);
    CHECK(balance_undersample(balanced, 7).samples == balanced.samples);
}

TEST_CASE("balance_undersample rejects an empty class") {
    Corpus c = make_corpus({{"a", RefactoringLabel::ExtractMethod}});
    CHECK_THROWS_AS(balance_undersample(c, 1), EmptyClassError);
}

TEST_CASE("split produces stratified 80/10/10") {
    Corpus c;
    for (int label = 0; label < 3; ++label) {
        for (int i = 0; i < 100; ++i) {
            c.samples.push_back(Sample{"s" + std::to_string(label * 100 + i),
                                       static_cast<RefactoringLabel>(label), ""});
        }
    }
    auto [tr, va, te] = split_train_val_test(c, 0.8, 0.1, 0.1, 42);
    CHECK(tr.size() == 240);
    CHECK(va.size() == 30);
    CHECK(te.size() == 30);
    CHECK(tr.counts() == std::array<long, 3>{80, 80, 80});
    CHECK(va.counts() == std::array<long, 3>{10, 10, 10});

    // deterministic under the same seed
    auto [tr2, va2, te2] = split_train_val_test(c, 0.8, 0.1, 0.1, 42);
    CHECK(tr2.samples == tr.samples);
    CHECK(te2.samples == te.samples);

    // disjoint and exhaustive
    std::set<std::string> seen;
    for (const Corpus* part : {&tr, &va, &te}) {
        for (const Sample& s : part->samples) {
            CHECK(seen.insert(s.code).second);
        }
    }
    CHECK(seen.size() == c.size());
}

TEST_CASE("split rejects fractions that do not sum to 1") {
    Corpus c = make_corpus({{"a", RefactoringLabel::ExtractMethod}});
    CHECK_THROWS_AS(split_train_val_test(c, 0.5, 0.5, 0.1, 1), FractionSumError);
}

TEST_CASE("kfold_split is a stratified partition") {
    Corpus c;
    for (int label = 0; label < 3; ++label) {
        for (int i = 0; i < 10; ++i) {
            c.samples.push_back(Sample{"s" + std::to_string(label * 10 + i),
                                       static_cast<RefactoringLabel>(label), ""});
        }
    }
    const FoldAssignment fa = kfold_split(c, 10, 42);
    CHECK(fa.k == 10);
    for (int fold = 0; fold < 10; ++fold) {
        const Corpus fc = subset(c, fa.fold_indices(fold));
        CHECK(fc.size() == 3);
        CHECK(fc.counts() == std::array<long, 3>{1, 1, 1});
    }
    // deterministic given the seed
    CHECK(kfold_split(c, 10, 42).fold_of == fa.fold_of);
    CHECK(kfold_split(c, 10, 43).fold_of != fa.fold_of);
}

TEST_CASE("kfold_split rejects classes smaller than k") {
    Corpus c;
    for (int label = 0; label < 3; ++label) {
        for (int i = 0; i < (label == 2 ? 9 : 12); ++i) {
            c.samples.push_back(Sample{"s", static_cast<RefactoringLabel>(label), ""});
        }
    }
    CHECK_THROWS_AS(kfold_split(c, 10, 1), ClassTooSmallError);
}

TEST_CASE("property: folds partition random corpora with <=1 stratification gap") {
    DetRng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const int k = 2 + static_cast<int>(rng.uniform_index(6));
        Corpus c = random_corpus(rng, 3 * k + static_cast<long>(rng.uniform_index(60)));
        const auto counts = c.counts();
        if (*std::min_element(counts.begin(), counts.end()) < k) {
            continue;
        }
        const FoldAssignment fa = kfold_split(c, k, rng.next_u64());
        std::vector<long> sizes(static_cast<size_t>(k), 0);
        for (size_t i = 0; i < c.size(); ++i) {
            REQUIRE(fa.fold_of[i] >= 0);
            REQUIRE(fa.fold_of[i] < k);
            ++sizes[static_cast<size_t>(fa.fold_of[i])];
        }
        long total = 0;
        for (long s : sizes) {
            total += s;
        }
        CHECK(total == static_cast<long>(c.size())); // exhaustive, folds disjoint by encoding

        for (int label = 0; label < 3; ++label) {
            long mn = 1 << 30, mx = -1;
            for (int fold = 0; fold < k; ++fold) {
                long n = 0;
                for (size_t i = 0; i < c.size(); ++i) {
                    if (fa.fold_of[i] == fold &&
                        c.samples[i].label == static_cast<RefactoringLabel>(label)) {
                        ++n;
                    }
                }
                mn = std::min(mn, n);
                mx = std::max(mx, n);
            }
            CHECK(mx - mn <= 1);
        }
    }
}

TEST_CASE("kfold_split_by_project keeps a project in one fold") {
    Corpus c;
    for (int i = 0; i < 24; ++i) {
        c.samples.push_back(Sample{"s" + std::to_string(i), static_cast<RefactoringLabel>(i % 3),
                                   "proj" + std::to_string(i % 6)});
    }
    const FoldAssignment fa = kfold_split_by_project(c, 3, 5);
    for (int i = 0; i < 24; ++i) {
        for (int j = 0; j < 24; ++j) {
            if (c.samples[i].project_id == c.samples[j].project_id) {
                CHECK(fa.fold_of[i] == fa.fold_of[j]);
            }
        }
    }
}
