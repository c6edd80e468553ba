#pragma once

#include <stdexcept>
#include <string>

namespace boksim {

// Base for every failure raised by the library. The CLI maps it to exit 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input data or arguments (schema violations, precondition failures).
// The CLI maps it to exit 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

// The embedding/scoring provider misbehaved or could not be reached.
class ProviderError : public Error {
public:
    using Error::Error;
};

}  // namespace boksim
