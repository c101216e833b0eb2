// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#pragma once

#include <cstdint>

#include "rose/corpus.hpp"

namespace rose {

/// Template-generated Java-like corpus with class-distinctive structure:
///   ExtractMethod — one oversized method of repeated statement blocks;
///   MoveClass     — a class importing and calling into a foreign package
///                   cluster;
///   PullUpMethod  — two sibling classes sharing an identical method.
/// Identifiers come from seeded pools; the same seed reproduces the same
/// corpus byte for byte. Rows are emitted label-block ordered.
Corpus synth_corpus(long per_class, uint64_t seed);

} // namespace rose
