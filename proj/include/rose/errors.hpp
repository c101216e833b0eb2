// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#pragma once

#include <stdexcept>
#include <string>

namespace rose {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Corpus / TSV ingestion. `line` is 1-based.
struct TsvError : Error {
    enum class Kind { UnknownLabel, MalformedRow, EmptyCode };
    Kind kind;
    long line;
    TsvError(Kind k, long line_no, const std::string& msg)
        : Error(msg), kind(k), line(line_no) {}
};

struct EmptyClassError : Error {
    using Error::Error;
};
struct FractionSumError : Error {
    using Error::Error;
};
struct ClassTooSmallError : Error {
    using Error::Error;
};

struct OutOfRangeIdError : Error {
    using Error::Error;
};

struct InvalidConfigError : Error {
    using Error::Error;
};
struct ShapeMismatchError : Error {
    using Error::Error;
};
struct IdOutOfRangeError : Error {
    using Error::Error;
};
struct NonFiniteError : Error {
    using Error::Error;
};
struct EmptyInputError : Error {
    using Error::Error;
};

struct CheckpointError : Error {
    enum class Kind { BadMagic, VersionMismatch, TruncatedFile };
    Kind kind;
    CheckpointError(Kind k, const std::string& msg) : Error(msg), kind(k) {}
};

struct EmptyCorpusError : Error {
    using Error::Error;
};

struct LengthMismatchError : Error {
    using Error::Error;
};
struct EmptyMatrixError : Error {
    using Error::Error;
};
struct TooFewFoldsError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace rose
