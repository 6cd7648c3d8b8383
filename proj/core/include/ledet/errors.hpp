#pragma once

#include <stdexcept>
#include <string>

namespace ledet {

// Base of every error thrown by the library. The CLI maps these to exit
// code 1; anything else escaping is a bug.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A referenced file is missing or unreadable.
class IoError : public Error {
public:
    using Error::Error;
};

// Manifest or CSV content is malformed (messages carry line numbers).
class ParseError : public Error {
public:
    using Error::Error;
};

// A domain-type invariant is violated; messages name the interaction and field.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A call violates an operation precondition (bad window, bad width, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Bad configuration detected before any work starts (e.g. AU set without
// the action units the positivity indicator needs).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A requested featureset cannot be computed for an interaction.
class FeaturizationError : public Error {
public:
    using Error::Error;
};

// Training cannot proceed: single-class input, bad labels, calibration failure.
class TrainingError : public Error {
public:
    using Error::Error;
};

// Prediction input does not cover the model's requirements.
class PredictionError : public Error {
public:
    using Error::Error;
};

} // namespace ledet
