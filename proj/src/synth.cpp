// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include "rose/synth.hpp"

#include <array>
#include <cctype>
#include <string>

#include "rose/errors.hpp"
#include "rose/tensor.hpp"

namespace rose {

namespace {

constexpr std::array<const char*, 16> kNouns = {
    "order",  "invoice", "account", "payment", "customer", "report", "session", "token",
    "record", "widget",  "channel", "message", "batch",    "ticket", "profile", "schema",
};

constexpr std::array<const char*, 12> kVerbs = {
    "process", "compute", "resolve", "update", "collect", "merge",
    "flush",   "index",   "audit",   "rank",   "sync",    "route",
};

constexpr std::array<const char*, 10> kPackages = {
    "core", "util", "net", "data", "store", "api", "model", "io", "cache", "event",
};

std::string cap(const std::string& s) {
    std::string out = s;
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

std::string pick(DetRng& rng, const auto& pool) {
    return pool[rng.uniform_index(pool.size())];
}

/// One oversized method whose body is a run of repeated statement blocks.
std::string extract_method_snippet(DetRng& rng) {
    const std::string cls = cap(pick(rng, kNouns)) + "Manager";
    const std::string method = pick(rng, kVerbs) + cap(pick(rng, kNouns));
    std::string out = "public class " + cls + " {\n";
    out += "  private int total;\n";
    out += "  public void " + method + "() {\n";
    const int blocks = 4 + static_cast<int>(rng.uniform_index(4));
    for (int b = 0; b < blocks; ++b) {
        const std::string var = pick(rng, kNouns) + std::to_string(rng.uniform_index(10));
        const std::string fn = pick(rng, kVerbs);
        out += "    int " + var + " = 0;\n";
        out += "    for (int i = 0; i < " + std::to_string(8 + rng.uniform_index(90)) +
               "; i++) { " + var + " += " + fn + "(i); }\n";
        out += "    if (" + var + " > " + std::to_string(rng.uniform_index(100)) +
               ") { total += " + var + "; }\n";
    }
    out += "  }\n}";
    return out;
}

/// A class whose fields and calls all point into a foreign package cluster.
std::string move_class_snippet(DetRng& rng) {
    const std::string here = pick(rng, kPackages);
    std::string there = pick(rng, kPackages);
    if (there == here) {
        there += "x";
    }
    const std::string widget = cap(pick(rng, kNouns));
    const std::string service = cap(pick(rng, kVerbs)) + "Service";
    const std::string cls = cap(pick(rng, kNouns)) + "Adapter";
    const std::string method = pick(rng, kVerbs) + cap(pick(rng, kNouns));
    std::string out = "package app." + here + ";\n";
    out += "import app." + there + "." + widget + ";\n";
    out += "import app." + there + "." + service + ";\n";
    out += "public class " + cls + " {\n";
    out += "  private " + widget + " delegate;\n";
    out += "  public void " + method + "() {\n";
    out += "    " + service + ".connect(delegate);\n";
    out += "    delegate.apply(app." + there + ".Registry.lookup(\"" + pick(rng, kNouns) +
           "\"));\n";
    out += "  }\n}";
    return out;
}

/// Two siblings of the same base carrying an identical method body.
std::string pull_up_snippet(DetRng& rng) {
    const std::string base = cap(pick(rng, kNouns)) + "Base";
    const std::string a = cap(pick(rng, kNouns)) + "Left";
    const std::string b = cap(pick(rng, kNouns)) + "Right";
    const std::string shared = pick(rng, kVerbs) + cap(pick(rng, kNouns));
    const std::string mul = std::to_string(2 + rng.uniform_index(9));
    const std::string add = std::to_string(rng.uniform_index(50));
    const std::string body =
        "  public int " + shared + "(int x) {\n    return x * " + mul + " + " + add + ";\n  }\n";
    std::string out = "public class " + a + " extends " + base + " {\n" + body + "}\n";
    out += "public class " + b + " extends " + base + " {\n" + body + "}";
    return out;
}

} // namespace

Corpus synth_corpus(long per_class, uint64_t seed) {
    if (per_class < 1) {
        throw InvalidConfigError("per_class must be at least 1");
    }
    DetRng rng(seed);
    Corpus corpus;
    corpus.samples.reserve(static_cast<size_t>(per_class) * kNumClasses);
    for (long i = 0; i < per_class; ++i) {
        corpus.samples.push_back(
            Sample{extract_method_snippet(rng), RefactoringLabel::ExtractMethod, ""});
    }
    for (long i = 0; i < per_class; ++i) {
        corpus.samples.push_back(Sample{move_class_snippet(rng), RefactoringLabel::MoveClass, ""});
    }
    for (long i = 0; i < per_class; ++i) {
        corpus.samples.push_back(Sample{pull_up_snippet(rng), RefactoringLabel::PullUpMethod, ""});
    }
    return corpus;
}

} // namespace rose
