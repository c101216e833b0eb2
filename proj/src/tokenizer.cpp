// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include "rose/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "rose/errors.hpp"

namespace rose {

namespace {

constexpr const char* kNumSentinel = "<NUM>";
constexpr const char* kStrSentinel = "<STR>";

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool is_digit(char c) {
    return c >= '0' && c <= '9';
}
bool is_lower(char c) {
    return c >= 'a' && c <= 'z';
}
bool is_upper(char c) {
    return c >= 'A' && c <= 'Z';
}

// Longest first.
constexpr std::array<std::string_view, 25> kOperators = {
    ">>>=", ">>>", ">>=", "<<=", "...", "->", "::", "++", "--", "<<", ">>", "<=", ">=",
    "==",   "!=",  "&&",  "||",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^=",
};

/// Splits one identifier at snake_case separators and camelCase boundaries,
/// lowercasing the segments. "getURLPath" -> get, url, path.
void split_identifier(std::string_view ident, std::vector<std::string>& out) {
    std::vector<std::string_view> words;
    size_t seg_begin = 0;
    auto flush_segment = [&](size_t begin, size_t end) {
        if (end <= begin) {
            return;
        }
        std::string_view seg = ident.substr(begin, end - begin);
        // camel boundaries within the segment
        size_t w = 0;
        for (size_t i = 1; i < seg.size(); ++i) {
            bool boundary = false;
            if (is_upper(seg[i]) && (is_lower(seg[i - 1]) || is_digit(seg[i - 1]))) {
                boundary = true; // fooBar, sha256Sum
            } else if (is_upper(seg[i]) && i + 1 < seg.size() && is_lower(seg[i + 1]) &&
                       is_upper(seg[i - 1])) {
                boundary = true; // HTTPServer -> HTTP | Server
            }
            if (boundary) {
                words.push_back(seg.substr(w, i - w));
                w = i;
            }
        }
        words.push_back(seg.substr(w));
    };
    for (size_t i = 0; i <= ident.size(); ++i) {
        if (i == ident.size() || ident[i] == '_' || ident[i] == '$') {
            flush_segment(seg_begin, i);
            seg_begin = i + 1;
        }
    }
    for (std::string_view w : words) {
        std::string lowered(w);
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        out.push_back(std::move(lowered));
    }
}

size_t scan_number(std::string_view code, size_t pos) {
    size_t i = pos;
    while (i < code.size()) {
        char c = code[i];
        // exponent sign first: 'e' alone would match the hex branch below
        if ((c == 'e' || c == 'E' || c == 'p' || c == 'P') && i + 1 < code.size() &&
            (code[i + 1] == '+' || code[i + 1] == '-')) {
            i += 2;
            continue;
        }
        if (is_digit(c) || c == '_' || c == '.' ||
            (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F') || c == 'x' || c == 'X' ||
            c == 'l' || c == 'L') {
            ++i;
            continue;
        }
        break;
    }
    return i;
}

size_t scan_quoted(std::string_view code, size_t pos, char quote) {
    size_t i = pos + 1;
    while (i < code.size()) {
        if (code[i] == '\\' && i + 1 < code.size()) {
            i += 2;
            continue;
        }
        if (code[i] == quote) {
            return i + 1;
        }
        if (code[i] == '\n') {
            return i; // unterminated literal ends at the line
        }
        ++i;
    }
    return i;
}

} // namespace

std::vector<std::string> lex(std::string_view code) {
    std::vector<std::string> out;
    size_t i = 0;
    const size_t n = code.size();
    while (i < n) {
        char c = code[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && code[i + 1] == '/') {
            while (i < n && code[i] != '\n') {
                ++i;
            }
            continue;
        }
        if (c == '/' && i + 1 < n && code[i + 1] == '*') {
            size_t end = code.find("*/", i + 2);
            i = end == std::string_view::npos ? n : end + 2;
            continue;
        }
        if (c == '"' || c == '\'') {
            i = scan_quoted(code, i, c);
            out.emplace_back(kStrSentinel);
            continue;
        }
        if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(code[i + 1]))) {
            i = scan_number(code, c == '.' ? i + 1 : i);
            out.emplace_back(kNumSentinel);
            continue;
        }
        if (ident_start(c)) {
            size_t end = i + 1;
            while (end < n && ident_cont(code[end])) {
                ++end;
            }
            split_identifier(code.substr(i, end - i), out);
            i = end;
            continue;
        }
        bool matched = false;
        for (std::string_view op : kOperators) {
            if (code.substr(i, op.size()) == op) {
                out.emplace_back(op);
                i += op.size();
                matched = true;
                break;
            }
        }
        if (matched) {
            continue;
        }
        out.emplace_back(1, c); // single punctuation or unknown byte
        ++i;
    }
    return out;
}

Vocab::Vocab(std::vector<std::string> tokens, size_t max_size)
    : tokens_(std::move(tokens)), max_size_(max_size) {
    index_.reserve(tokens_.size());
    for (size_t i = 0; i < tokens_.size(); ++i) {
        index_.emplace(tokens_[i], static_cast<int32_t>(i) + kNumSpecials);
    }
}

int32_t Vocab::id_of(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnkId : it->second;
}

const std::string& Vocab::token_of(int32_t id) const {
    static const std::array<std::string, kNumSpecials> specials = {"<pad>", "<unk>", "<cls>",
                                                                   "<eos>"};
    if (id < 0 || id >= size()) {
        throw OutOfRangeIdError("token id " + std::to_string(id) + " out of range");
    }
    if (id < kNumSpecials) {
        return specials[static_cast<size_t>(id)];
    }
    return tokens_[static_cast<size_t>(id - kNumSpecials)];
}

Vocab build_vocab(const Corpus& corpus, size_t max_size) {
    if (max_size < 5) {
        throw InvalidConfigError("vocab max_size must be at least 5");
    }
    std::unordered_map<std::string, long> freq;
    for (const Sample& s : corpus.samples) {
        for (std::string& t : lex(s.code)) {
            ++freq[t];
        }
    }
    std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    const size_t keep = std::min(ranked.size(), max_size - kNumSpecials);
    std::vector<std::string> tokens;
    tokens.reserve(keep);
    for (size_t i = 0; i < keep; ++i) {
        tokens.push_back(ranked[i].first);
    }
    return Vocab(std::move(tokens), max_size);
}

TokenSeq encode(std::string_view code, const Vocab& vocab) {
    TokenSeq seq;
    std::vector<std::string> tokens = lex(code);
    seq.ids.reserve(tokens.size() + 2);
    seq.ids.push_back(kClsId);
    for (const std::string& t : tokens) {
        seq.ids.push_back(vocab.id_of(t));
    }
    seq.ids.push_back(kEosId);
    return seq;
}

std::string decode(std::span<const int32_t> ids, const Vocab& vocab) {
    std::string out;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += vocab.token_of(ids[i]);
    }
    return out;
}

void save_vocab(const Vocab& vocab, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    for (const std::string& t : vocab.tokens()) {
        out << t << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path);
    }
}

Vocab load_vocab(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        tokens.push_back(line);
    }
    const size_t size = tokens.size() + kNumSpecials;
    return Vocab(std::move(tokens), size);
}

std::string vocab_fingerprint(const Vocab& vocab) {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    };
    for (const std::string& t : vocab.tokens()) {
        for (char c : t) {
            mix(c);
        }
        mix('\n');
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace rose
