#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mtafp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (FASTA, OBO, TSV, prediction files, config).
class ParseError : public Error {
public:
    using Error::Error;
};

// Structurally valid input that violates a domain rule (bad residue,
// reference mismatch, unknown term, unresolvable protein id).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Non-fatal diagnostics accumulated during parsing/normalization.
// Callers that do not care pass nullptr.
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
    if (sink) sink->push_back(std::move(message));
}

} // namespace mtafp
