// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rose/model.hpp"

namespace rose {

/// AdamW moments plus step counter, embedded in checkpoints behind a header
/// flag so a paused run resumes bit-exactly.
struct OptimizerState {
    Parameters m;
    Parameters v;
    int64_t step = 0;
};

/// Everything needed to resume or serve a model. Tensors are f32 on disk and
/// on the f32 grid in memory, so save -> load -> forward is bitwise
/// identical to the in-memory forward.
struct Checkpoint {
    ModelConfig config;
    Parameters params;
    uint64_t seed = 0;
    int epoch = 0;
    std::string vocab_path;
    std::string vocab_hash;
    std::optional<OptimizerState> optimizer;
};

/// File layout: magic "ROSE", u32 LE version, u64 LE header length, JSON
/// header (config, vocab path/hash, seed, epoch, ordered tensor manifest),
/// then raw IEEE-754 f32 LE tensor data in manifest order; optimizer moments
/// follow the parameters when the header flags them present.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);

/// Throws CheckpointError (BadMagic / VersionMismatch / TruncatedFile) on a
/// damaged file.
Checkpoint load_checkpoint(const std::string& path);

constexpr uint32_t kCheckpointVersion = 1;

} // namespace rose
