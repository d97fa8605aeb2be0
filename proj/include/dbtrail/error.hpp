#pragma once

#include <stdexcept>
#include <string>

namespace dbtrail {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input could not be parsed (schema JSON, CSV, XML, query text, index files).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input parsed but violates a structural invariant (dangling FK, duplicate key, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A node, row or term that the caller asked for does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

} // namespace dbtrail
