// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include "rose/windowing.hpp"

#include <algorithm>
#include <cmath>

#include "rose/errors.hpp"

namespace rose {

int Window::real_len() const {
    int m = 0;
    for (uint8_t b : mask) {
        m += b ? 1 : 0;
    }
    return m;
}

long window_count(long t, const WindowPlan& plan) {
    if (t <= plan.window_len) {
        return 1;
    }
    const long w = plan.window_len;
    const long s = plan.stride;
    return (t - w + s - 1) / s + 1;
}

std::vector<Window> chunk(const TokenSeq& seq, const WindowPlan& plan) {
    if (seq.ids.empty()) {
        throw EmptyInputError("cannot chunk an empty sequence");
    }
    if (!plan.valid()) {
        throw InvalidConfigError("window plan requires 0 < stride <= window_len <= model_max");
    }
    const long t = static_cast<long>(seq.ids.size());
    const long n = window_count(t, plan);
    const int w = plan.window_len;
    std::vector<Window> out;
    out.reserve(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
        const long off = i * plan.stride;
        const long real = std::min<long>(w, t - off);
        Window win;
        win.ids.assign(static_cast<size_t>(w), kPadId);
        win.mask.assign(static_cast<size_t>(w), 0);
        for (long j = 0; j < real; ++j) {
            win.ids[static_cast<size_t>(j)] = seq.ids[static_cast<size_t>(off + j)];
            win.mask[static_cast<size_t>(j)] = 1;
        }
        out.push_back(std::move(win));
    }
    return out;
}

std::array<double, 3> aggregate(const std::vector<std::array<double, 3>>& window_logits) {
    if (window_logits.empty()) {
        throw EmptyInputError("aggregate needs at least one window");
    }
    std::array<double, 3> mean{};
    for (const auto& l : window_logits) {
        for (int c = 0; c < 3; ++c) {
            mean[c] += l[c];
        }
    }
    for (int c = 0; c < 3; ++c) {
        mean[c] /= static_cast<double>(window_logits.size());
    }
    return mean;
}

} // namespace rose
