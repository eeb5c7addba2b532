#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace sldg {

/// Base class of every error raised by the solver.
class Error : public std::exception {
public:
    explicit Error(std::string what) : what_(std::move(what)) {}

    [[nodiscard]] const char* what() const noexcept override { return what_.c_str(); }

    /// Prefixes the message (e.g. with the stage that was running) while
    /// keeping the dynamic type, so callers can rethrow with `throw;`.
    void add_context(const std::string& context) { what_ = context + ": " + what_; }

private:
    std::string what_;
};

/// Error tied to one Eulerian element (geometry or reconstruction failures).
class ElementError : public Error {
public:
    ElementError(const std::string& what, std::ptrdiff_t element)
        : Error(element >= 0 ? what + " (element " + std::to_string(element) + ")" : what),
          element_(element) {}

    [[nodiscard]] std::ptrdiff_t element() const noexcept { return element_; }

private:
    std::ptrdiff_t element_;
};

/// Upstream cell collapsed, inverted or self-intersecting. Usually means the
/// time step is too large for the deformation of the flow.
class DegenerateCell : public ElementError {
public:
    using ElementError::ElementError;
};

/// Coincident endpoints of an upstream edge.
class DegenerateEdge : public DegenerateCell {
public:
    using DegenerateCell::DegenerateCell;
};

/// Least-squares fit of the transported test function is rank deficient.
class SingularFit : public ElementError {
public:
    using ElementError::ElementError;
};

/// Segment bookkeeping of the clipping kernel produced an open boundary.
class ClipFailure : public ElementError {
public:
    using ElementError::ElementError;
};

/// Positivity limiter met a negative cell average.
class NegativeAverage : public ElementError {
public:
    using ElementError::ElementError;
};

/// A step produced inf or NaN coefficients (the scheme went unstable).
class NonFiniteState : public ElementError {
public:
    using ElementError::ElementError;
};

class UnknownTableau : public Error {
public:
    explicit UnknownTableau(const std::string& name) : Error("unknown tableau '" + name + "'") {}
};

class MeshMismatch : public Error {
public:
    using Error::Error;
};

/// Both transport speeds vanish, so a CFL time step is undefined.
class ZeroSpeed : public Error {
public:
    ZeroSpeed() : Error("zero transport speed in both directions") {}
};

/// Malformed configuration text; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

/// Configuration that parses but is not acceptable; names the offending key.
class ValidationError : public Error {
public:
    ValidationError(const std::string& key, const std::string& what)
        : Error(key + ": " + what), key_(key) {}

    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace sldg
