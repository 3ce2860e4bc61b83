#pragma once

#include <stdexcept>
#include <string>

namespace lanegp {

// Regularized Gram matrix could not be factorized even after jitter
// escalation (degenerate inputs, e.g. all times at the kernel offset with
// zero noise).
class FactorizationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every point probed by the hyperparameter search failed to factorize.
class OptimizationDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Forecaster needs more observed samples than the request supplies.
class InsufficientPrefix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Maneuver id already present in the bank.
class DuplicateManeuver : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input file is unreadable as the expected format (bad header, delimiter,
// empty file, broken maneuver-window file).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// More than the tolerated fraction of data lines failed to parse.
class TooManyBadRows : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Aggregation over an empty sample list.
class EmptyInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Failed filesystem write/read.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad key or value in a config file or override.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lanegp
