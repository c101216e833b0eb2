// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rose/corpus.hpp"

namespace rose {

// Reserved vocabulary ids.
constexpr int32_t kPadId = 0;
constexpr int32_t kUnkId = 1;
constexpr int32_t kClsId = 2;
constexpr int32_t kEosId = 3;
constexpr int32_t kNumSpecials = 4;

/// Token -> id mapping with the four reserved specials. Ids are dense in
/// [0, size()). Immutable after construction.
class Vocab {
public:
    Vocab() = default;

    /// Tokens in id order, ids starting at kNumSpecials.
    explicit Vocab(std::vector<std::string> tokens, size_t max_size);

    int32_t id_of(const std::string& token) const; // kUnkId when absent
    const std::string& token_of(int32_t id) const; // throws OutOfRangeIdError
    int32_t size() const { return static_cast<int32_t>(tokens_.size()) + kNumSpecials; }
    size_t max_size() const { return max_size_; }
    const std::vector<std::string>& tokens() const { return tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int32_t> index_;
    size_t max_size_ = 0;
};

/// An encoded snippet: starts with CLS, ends with EOS, every id < |V|.
struct TokenSeq {
    std::vector<int32_t> ids;
};

/// Java-flavored lexer. Splits into identifiers/keywords (camelCase and
/// snake_case segments, lowercased), numeric literals (collapsed to <NUM>),
/// string/char literals (collapsed to <STR>), multi-char operators kept
/// intact, and single punctuation. Comments and whitespace are dropped.
/// Total: any byte sequence lexes; unknown bytes become single-char tokens.
std::vector<std::string> lex(std::string_view code);

/// Builds a frequency-ranked vocabulary over the lexed corpus. Most frequent
/// tokens get the smallest ids; ties break lexicographically. max_size caps
/// the total size including the four specials (so max_size >= 5 keeps at
/// least one surface token).
Vocab build_vocab(const Corpus& corpus, size_t max_size);

/// [CLS] ++ token ids (UNK for out-of-vocabulary) ++ [EOS]. No length cap:
/// long sequences are the windowing module's concern.
TokenSeq encode(std::string_view code, const Vocab& vocab);

/// Space-joined surface form; specials render as <pad>/<unk>/<cls>/<eos>.
/// Throws OutOfRangeIdError on ids outside the vocabulary.
std::string decode(std::span<const int32_t> ids, const Vocab& vocab);

/// Vocabulary file: one token per line, line number = id - 4. Bit-exact
/// round trip.
void save_vocab(const Vocab& vocab, const std::string& path);
Vocab load_vocab(const std::string& path);

/// FNV-1a 64 over the serialized vocabulary, as stored in checkpoints.
std::string vocab_fingerprint(const Vocab& vocab);

} // namespace rose
