#pragma once

#include <stdexcept>
#include <string>

namespace cfswarm {

/// Base of the library's error hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition (empty input, k = 0, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Bad or inconsistent configuration: unknown model kind, no mutable
/// features, malformed config file.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data does not conform to the feature schema.
class SchemaViolation : public Error {
public:
    using Error::Error;
};

class MissingColumnError : public SchemaViolation {
public:
    using SchemaViolation::SchemaViolation;
};

class NonNumericValueError : public SchemaViolation {
public:
    using SchemaViolation::SchemaViolation;
};

class UnseenLevelError : public SchemaViolation {
public:
    using SchemaViolation::SchemaViolation;
};

class NonBinaryLabelError : public SchemaViolation {
public:
    using SchemaViolation::SchemaViolation;
};

/// Training cannot proceed (e.g. single-class training data).
class TrainingError : public Error {
public:
    using Error::Error;
};

/// An internal invariant is broken; indicates a bug, not user error.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace cfswarm
