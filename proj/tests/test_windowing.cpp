// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include <doctest.h>

#include "rose/errors.hpp"
#include "rose/tensor.hpp"
#include "rose/windowing.hpp"

using namespace rose;

namespace {

TokenSeq seq_of_len(long t) {
    TokenSeq s;
    s.ids.resize(static_cast<size_t>(t));
    s.ids.front() = kClsId;
    for (long i = 1; i + 1 < t; ++i) {
        s.ids[static_cast<size_t>(i)] = 4 + static_cast<int32_t>(i % 50);
    }
    if (t > 1) {
        s.ids.back() = kEosId;
    }
    return s;
}

} // namespace

TEST_CASE("chunk boundary cases") {
    const WindowPlan plan{200, 100, 512};

    auto one = chunk(seq_of_len(200), plan);
    REQUIRE(one.size() == 1);
    CHECK(one[0].real_len() == 200);

    auto four = chunk(seq_of_len(500), plan);
    REQUIRE(four.size() == 4);
    for (size_t i = 0; i < 4; ++i) {
        // window i must start at offset i*stride
        CHECK(four[i].ids[0] == seq_of_len(500).ids[i * 100]);
    }
    CHECK(four[3].real_len() == 200);

    auto padded = chunk(seq_of_len(50), plan);
    REQUIRE(padded.size() == 1);
    CHECK(padded[0].real_len() == 50);
    for (size_t j = 50; j < 200; ++j) {
        CHECK(padded[0].ids[j] == kPadId);
        CHECK(padded[0].mask[j] == 0);
    }
}

TEST_CASE("chunk validates inputs") {
    CHECK_THROWS_AS(chunk(TokenSeq{}, WindowPlan{}), EmptyInputError);
    CHECK_THROWS_AS(chunk(seq_of_len(5), WindowPlan{200, 0, 512}), InvalidConfigError);
    CHECK_THROWS_AS(chunk(seq_of_len(5), WindowPlan{600, 100, 512}), InvalidConfigError);
}

TEST_CASE("property: coverage, overlap and count formula over random lengths") {
    DetRng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const long t = 1 + static_cast<long>(rng.uniform_index(5000));
        const int w = 2 + static_cast<int>(rng.uniform_index(300));
        const int s = 1 + static_cast<int>(rng.uniform_index(static_cast<size_t>(w)));
        const WindowPlan plan{w, s, 5500};
        const auto windows = chunk(seq_of_len(t), plan);

        const long expect =
            t <= w ? 1 : (t - w + s - 1) / s + 1; // ceil((t-w)/s) + 1
        CHECK(static_cast<long>(windows.size()) == expect);

        std::vector<int> covered(static_cast<size_t>(t), 0);
        for (size_t i = 0; i < windows.size(); ++i) {
            const long off = static_cast<long>(i) * s;
            const int real = windows[i].real_len();
            for (int j = 0; j < real; ++j) {
                ++covered[static_cast<size_t>(off + j)];
            }
            CHECK(real >= 1);
        }
        for (int c : covered) {
            CHECK(c >= 1);
        }
        if (t > w) {
            // consecutive windows share exactly w - s positions
            for (size_t i = 0; i + 1 < windows.size(); ++i) {
                const long off_a = static_cast<long>(i) * s;
                const long off_b = off_a + s;
                const long end_a = off_a + windows[i].real_len();
                const long end_b = off_b + windows[i + 1].real_len();
                const long shared = std::min(end_a, end_b) - off_b;
                if (end_a - off_a == w && end_b - off_b == w) {
                    CHECK(shared == w - s);
                }
            }
        }
    }
}

TEST_CASE("aggregate is the component-wise mean") {
    CHECK(aggregate({{1, 2, 3}}) == std::array<double, 3>{1, 2, 3});
    CHECK(aggregate({{1, 0, 0}, {3, 0, 0}}) == std::array<double, 3>{2, 0, 0});
    const std::array<double, 3> v{0.5, -1.25, 2.0};
    CHECK(aggregate({v, v, v, v}) == v);
    CHECK_THROWS_AS(aggregate({}), EmptyInputError);
}

TEST_CASE("property: aggregate is permutation invariant and linear") {
    DetRng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::array<double, 3>> ls(1 + rng.uniform_index(8));
        for (auto& l : ls) {
            for (double& x : l) {
                x = rng.normal(0.0, 2.0);
            }
        }
        const auto base = aggregate(ls);

        std::vector<std::array<double, 3>> shuffled = ls;
        rng.shuffle(shuffled);
        const auto perm = aggregate(shuffled);
        for (int c = 0; c < 3; ++c) {
            CHECK(perm[c] == doctest::Approx(base[c]).epsilon(1e-12));
        }

        const double scale = rng.normal(0.0, 3.0);
        std::vector<std::array<double, 3>> scaled = ls;
        for (auto& l : scaled) {
            for (double& x : l) {
                x *= scale;
            }
        }
        const auto lin = aggregate(scaled);
        for (int c = 0; c < 3; ++c) {
            CHECK(lin[c] == doctest::Approx(scale * base[c]).epsilon(1e-9));
        }
    }
}
