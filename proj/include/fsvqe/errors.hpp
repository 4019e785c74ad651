#pragma once

#include <stdexcept>
#include <string>

namespace fsvqe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands disagree on qubit count or matrix shape.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A dense representation would exceed the supported size.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// An expectation value or operator that must be Hermitian is not.
class HermiticityError : public Error {
public:
    using Error::Error;
};

/// Malformed input text; carries the offending line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& source, int line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : Error(what) {}

    int line() const { return line_; }

private:
    int line_ = 0;
};

/// Well-formed input whose content violates a physical or structural invariant.
class DataError : public Error {
public:
    using Error::Error;
};

/// A caller-supplied argument is outside its documented domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace fsvqe
