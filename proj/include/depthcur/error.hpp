#pragma once

#include <stdexcept>
#include <string>

namespace depthcur {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read, written or renamed.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents or structured text.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Operands whose dimensions disagree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Ill-posed numerical problem: singular normal equations, collinear samples,
/// zero-norm vectors, empty valid sets.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Argument outside its documented domain.
class ArgumentError : public Error {
public:
    using Error::Error;
};

}  // namespace depthcur
