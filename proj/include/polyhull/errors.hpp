#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polyhull {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t column)
        : Error(what + " (column " + std::to_string(column + 1) + ")"), column(column) {}
    std::size_t column;
};

struct ZeroPolynomial : Error {
    using Error::Error;
};

struct PoleAtPoint : Error {
    using Error::Error;
};

struct PreconditionViolation : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

struct DegreeTooLarge : Error {
    using Error::Error;
};

struct ExtensionInsufficient : Error {
    using Error::Error;
};

struct DegenerateSlice : Error {
    using Error::Error;
};

struct IncompleteCloud : Error {
    using Error::Error;
};

struct LPNumericalFailure : Error {
    using Error::Error;
};

struct UnsupportedMapKind : Error {
    using Error::Error;
};

struct HypothesisViolation : Error {
    using Error::Error;
};

}  // namespace polyhull
