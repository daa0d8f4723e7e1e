#pragma once

#include <stdexcept>
#include <string>

namespace qc {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid user configuration or argument out of its domain.
class ConfigError : public Error {
public:
    using Error::Error;
};

class DomainError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// A grid or window configuration that is singular at the working tolerance:
// concurrent grid lines, a test point on a window boundary, a degenerate slice.
class SingularError : public Error {
public:
    using Error::Error;
};

class DegenerateWindowError : public SingularError {
public:
    using SingularError::SingularError;
};

class EmptyWindowError : public Error {
public:
    using Error::Error;
};

class MalformedPolygonError : public Error {
public:
    using Error::Error;
};

// Computed geometry disagrees with a known combinatorial fact.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// An observed vertex type or overlap signature outside the known census.
class CensusViolation : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace qc
