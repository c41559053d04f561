#pragma once

#include <stdexcept>
#include <string>

namespace iagree {

/// Malformed or contract-violating input (bad CSV rows, out-of-scale
/// ratings, duplicate records, unknown labels). CLI exit code 2.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// File system / stream failures. CLI exit code 3.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mathematically undefined requests: degenerate sets, queries outside
/// the rating domain, slice indices out of range. CLI exit code 4.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

} // namespace iagree
