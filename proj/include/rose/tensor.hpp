// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace rose {

/// Dense row-major f64 matrix. Row vectors (biases, layer-norm params) use
/// rows == 1. All training math runs in f64; checkpoints store f32, so
/// persistent state is kept on the f32 grid (see quantize_f32).
struct Tensor {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
    double* row(int r) { return v.data() + static_cast<size_t>(r) * cols; }
    const double* row(int r) const { return v.data() + static_cast<size_t>(r) * cols; }
    size_t size() const { return v.size(); }
    void fill(double x) { std::fill(v.begin(), v.end(), x); }
};

/// C = A * B.  A: [m,k], B: [k,n].
void matmul(const Tensor& a, const Tensor& b, Tensor& c);

/// C = A^T * B.  A: [k,m], B: [k,n].  (Weight-gradient kernel.)
void matmul_at_b(const Tensor& a, const Tensor& b, Tensor& c);

/// C = A * B^T.  A: [m,k], B: [n,k].  (Attention-score kernel.)
void matmul_a_bt(const Tensor& a, const Tensor& b, Tensor& c);

/// Rounds every element to the nearest f32 value. Persistent tensors
/// (parameters, optimizer moments) are kept on this grid at all times so the
/// f32 checkpoint round trip is bitwise exact.
void quantize_f32(Tensor& t);

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard; the normal/index transforms are implemented here rather than
/// through std::normal_distribution, whose output is implementation-defined.
class DetRng {
public:
    explicit DetRng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Box-Muller. Two uniforms per draw, no caching.
    double normal(double mean, double stddev);

    /// Uniform integer in [0, n) by rejection.
    size_t uniform_index(size_t n);

    /// Fisher-Yates, pinned here so shuffles are reproducible.
    template <typename T>
    void shuffle(std::vector<T>& xs) {
        for (size_t i = xs.size(); i > 1; --i) {
            size_t j = uniform_index(i);
            std::swap(xs[i - 1], xs[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

/// splitmix64-style mixing for deriving per-epoch / per-purpose seeds.
uint64_t mix_seed(uint64_t a, uint64_t b);
uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c);

} // namespace rose
