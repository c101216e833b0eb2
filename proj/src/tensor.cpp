// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include "rose/tensor.hpp"

#include <cassert>
#include <cmath>

namespace rose {

void matmul(const Tensor& a, const Tensor& b, Tensor& c) {
    assert(a.cols == b.rows);
    c = Tensor(a.rows, b.cols);
    const int k_dim = a.cols;
    const int n = b.cols;
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (int k = 0; k < k_dim; ++k) {
            const double aik = arow[k];
            const double* brow = b.row(k);
            for (int j = 0; j < n; ++j) {
                crow[j] += aik * brow[j];
            }
        }
    }
}

void matmul_at_b(const Tensor& a, const Tensor& b, Tensor& c) {
    assert(a.rows == b.rows);
    c = Tensor(a.cols, b.cols);
    const int n = b.cols;
    for (int k = 0; k < a.rows; ++k) {
        const double* arow = a.row(k);
        const double* brow = b.row(k);
        for (int i = 0; i < a.cols; ++i) {
            const double aki = arow[i];
            double* crow = c.row(i);
            for (int j = 0; j < n; ++j) {
                crow[j] += aki * brow[j];
            }
        }
    }
}

void matmul_a_bt(const Tensor& a, const Tensor& b, Tensor& c) {
    assert(a.cols == b.cols);
    c = Tensor(a.rows, b.rows);
    const int k_dim = a.cols;
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (int j = 0; j < b.rows; ++j) {
            const double* brow = b.row(j);
            // four accumulators; the summation order is fixed, which is all
            // determinism needs
            double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
            int k = 0;
            for (; k + 4 <= k_dim; k += 4) {
                s0 += arow[k] * brow[k];
                s1 += arow[k + 1] * brow[k + 1];
                s2 += arow[k + 2] * brow[k + 2];
                s3 += arow[k + 3] * brow[k + 3];
            }
            for (; k < k_dim; ++k) {
                s0 += arow[k] * brow[k];
            }
            crow[j] = (s0 + s1) + (s2 + s3);
        }
    }
}

void quantize_f32(Tensor& t) {
    for (double& x : t.v) {
        x = static_cast<double>(static_cast<float>(x));
    }
}

double DetRng::normal(double mean, double stddev) {
    // Box-Muller on (0,1] x [0,1)
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * M_PI * u2);
}

size_t DetRng::uniform_index(size_t n) {
    if (n <= 1) {
        return 0;
    }
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x = gen_();
    while (x >= limit) {
        x = gen_();
    }
    return static_cast<size_t>(x % n);
}

namespace {
uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace

uint64_t mix_seed(uint64_t a, uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

} // namespace rose
