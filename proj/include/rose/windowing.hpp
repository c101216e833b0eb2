// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rose/tokenizer.hpp"

namespace rose {

/// Sliding-window geometry. Defaults follow the fixed 200/100 configuration;
/// model_max is the largest window the encoder can position-embed.
struct WindowPlan {
    int window_len = 200;
    int stride = 100;
    int model_max = 512;

    bool valid() const {
        return stride > 0 && stride <= window_len && window_len <= model_max;
    }
};

/// A fixed-length chunk: ids PAD-filled at the tail, mask true on real
/// tokens. The mask is always a prefix of trues with at least one true.
struct Window {
    std::vector<int32_t> ids;
    std::vector<uint8_t> mask;

    int real_len() const;
};

/// Chunks a sequence into overlapping windows. Window i covers positions
/// [i*stride, i*stride + window_len); the count is 1 when |seq| <= window_len
/// and ceil((|seq| - window_len) / stride) + 1 otherwise.
std::vector<Window> chunk(const TokenSeq& seq, const WindowPlan& plan);

/// Closed-form window count for a sequence of length t under the plan.
long window_count(long t, const WindowPlan& plan);

/// Component-wise arithmetic mean of per-window logits. Throws
/// EmptyInputError on an empty list.
std::array<double, 3> aggregate(const std::vector<std::array<double, 3>>& window_logits);

} // namespace rose
