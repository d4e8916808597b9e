// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace moc {

/// Base class for every error raised by the toolkit. Catching moc::Error
/// at the CLI boundary maps cleanly onto the "data error" exit code.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed record in a line-oriented file. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A label sequence does not line up with the timeline it refers to.
class AlignmentError : public Error {
public:
    using Error::Error;
};

class EmptySequence : public Error {
public:
    using Error::Error;
};

class InvalidFoldCount : public Error {
public:
    using Error::Error;
};

class InsufficientCandidates : public Error {
public:
    using Error::Error;
};

/// Non-finite intermediate value or total underflow in a probability
/// computation.
class NumericalError : public Error {
public:
    using Error::Error;
};

class EmptyVocabulary : public Error {
public:
    using Error::Error;
};

class InvalidDistribution : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

class TrainingDiverged : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class InsufficientHistory : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace moc
