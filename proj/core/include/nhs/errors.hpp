// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

#include <stdexcept>
#include <string>

namespace nhs {

/// Base class for all library errors. The three concrete categories map to
/// distinct process exit codes in the CLI (config: 2, numerical: 3,
/// precondition: 4).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed user input: bad config files, unknown keys, invalid flag values.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// A caller violated a documented precondition (e.g. mismatched coefficient
/// kinds, a point that is not a critical point, a non-expandable initial
/// condition).
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// A computation failed numerically: eigensolver breakdown, ill-conditioned
/// eigenvector basis, loss of positivity beyond tolerance, domain errors in
/// expression evaluation.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
};

}  // namespace nhs
