// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "rose/errors.hpp"
#include "rose/tensor.hpp"
#include "rose/tokenizer.hpp"

using namespace rose;

namespace {

Corpus corpus_of(std::initializer_list<const char*> codes) {
    Corpus c;
    for (const char* code : codes) {
        c.samples.push_back(Sample{code, RefactoringLabel::ExtractMethod, ""});
    }
    return c;
}

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        out += (i ? " " : "") + tokens[i];
    }
    return out;
}

} // namespace

TEST_CASE("lex splits statements into surface tokens") {
    CHECK(lex("int x = 42;") == std::vector<std::string>{"int", "x", "=", "<NUM>", ";"});
    CHECK(lex("getUserName") == std::vector<std::string>{"get", "user", "name"});
    CHECK(lex("").empty());
}

TEST_CASE("lex handles identifier split rules") {
    CHECK(lex("snake_case_name") == std::vector<std::string>{"snake", "case", "name"});
    CHECK(lex("HTTPServer") == std::vector<std::string>{"http", "server"});
    CHECK(lex("parseURLPath2") == std::vector<std::string>{"parse", "url", "path2"});
    CHECK(lex("GetUser") == lex("getUser"));
}

TEST_CASE("lex collapses literals and drops comments") {
    CHECK(lex("x = \"hello world\";") == std::vector<std::string>{"x", "=", "<STR>", ";"});
    CHECK(lex("c = 'a';") == std::vector<std::string>{"c", "=", "<STR>", ";"});
    CHECK(lex("a = 0x1F + 2.5e-3; // tail comment") ==
          std::vector<std::string>{"a", "=", "<NUM>", "+", "<NUM>", ";"});
    CHECK(lex("/* block\ncomment */ y") == std::vector<std::string>{"y"});
}

TEST_CASE("lex keeps multi-char operators intact") {
    CHECK(lex("a == b") == std::vector<std::string>{"a", "==", "b"});
    CHECK(lex("x -> y") == std::vector<std::string>{"x", "->", "y"});
    CHECK(lex("i <= n && j >= m") ==
          std::vector<std::string>{"i", "<=", "n", "&&", "j", ">=", "m"});
    CHECK(lex("i++;") == std::vector<std::string>{"i", "++", ";"});
}

TEST_CASE("lex is total on arbitrary bytes") {
    std::string junk;
    for (int b = 1; b < 256; ++b) {
        junk += static_cast<char>(b);
    }
    CHECK_NOTHROW(lex(junk));
}

TEST_CASE("property: lexing rejoined output is a fixed point") {
    // Literal sentinels excluded: their surface form does not re-lex to
    // itself by design.
    DetRng rng(4);
    const std::vector<std::string> pool = {"foo", "barBaz", "if", "(", ")", "{", "}",
                                           "==",  "->",     "x", ";", "+", "while"};
    for (int trial = 0; trial < 50; ++trial) {
        std::string code;
        const size_t len = 1 + rng.uniform_index(30);
        for (size_t i = 0; i < len; ++i) {
            code += pool[rng.uniform_index(pool.size())];
            code += ' ';
        }
        const auto once = lex(code);
        CHECK(lex(join(once)) == once);
    }
}

TEST_CASE("build_vocab ranks by frequency with lexicographic ties") {
    // zz appears three times, aa and bb twice each (tie), cc once
    const Corpus c = corpus_of({"zz zz zz aa aa bb bb cc"});
    const Vocab v = build_vocab(c, 100);
    CHECK(v.id_of("zz") == 4);
    CHECK(v.id_of("aa") == 5);
    CHECK(v.id_of("bb") == 6);
    CHECK(v.id_of("cc") == 7);
    CHECK(v.size() == 8);
}

TEST_CASE("build_vocab single-token corpus") {
    const Vocab v = build_vocab(corpus_of({"x"}), 100);
    CHECK(v.size() == 5);
    CHECK(v.id_of("x") == 4);
}

TEST_CASE("build_vocab truncates at max_size keeping the most frequent") {
    std::string code;
    for (int i = 0; i < 100; ++i) {
        code += "tok" + std::to_string(i) + " ";
    }
    code += "best best best";
    const Vocab v = build_vocab(corpus_of({code.c_str()}), 5);
    CHECK(v.size() == 5);
    CHECK(v.id_of("best") == 4);
    CHECK(v.id_of("tok1") == kUnkId);
}

TEST_CASE("build_vocab is deterministic") {
    const Corpus c = corpus_of({"alpha beta gamma", "beta gamma delta", "gamma delta epsilon"});
    const Vocab a = build_vocab(c, 64);
    const Vocab b = build_vocab(c, 64);
    CHECK(a.tokens() == b.tokens());
}

TEST_CASE("encode wraps ids in CLS/EOS and maps unknowns to UNK") {
    const Vocab v = build_vocab(corpus_of({"int x ;"}), 100);
    const TokenSeq seq = encode("int x;", v);
    REQUIRE(seq.ids.size() == 5);
    CHECK(seq.ids.front() == kClsId);
    CHECK(seq.ids.back() == kEosId);
    for (int32_t id : seq.ids) {
        CHECK(id < v.size());
    }
    const TokenSeq unk = encode("zzz", v);
    CHECK(unk.ids[1] == kUnkId);
    const TokenSeq empty = encode("", v);
    CHECK(empty.ids == std::vector<int32_t>{kClsId, kEosId});
}

TEST_CASE("decode renders specials and rejects out-of-range ids") {
    const Vocab v = build_vocab(corpus_of({"x"}), 100);
    const std::vector<int32_t> ids = {kClsId, v.id_of("x"), kEosId};
    CHECK(decode(ids, v) == "<cls> x <eos>");
    CHECK(decode(std::vector<int32_t>{}, v).empty());
    CHECK_THROWS_AS(decode(std::vector<int32_t>{v.size()}, v), OutOfRangeIdError);
}

TEST_CASE("vocab file round trips bit-exactly") {
    const Corpus c = corpus_of({"public class Foo { int barBaz = 1; }"});
    const Vocab v = build_vocab(c, 64);
    const std::string path =
        (std::filesystem::temp_directory_path() / "rose_vocab_test.txt").string();
    save_vocab(v, path);
    const Vocab back = load_vocab(path);
    CHECK(back.tokens() == v.tokens());
    CHECK(vocab_fingerprint(back) == vocab_fingerprint(v));
    std::remove(path.c_str());
}
