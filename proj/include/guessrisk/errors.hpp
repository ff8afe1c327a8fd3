#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace guessrisk {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad PMF, ragged table, zero column mass, wrong vector length.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A parameter lies outside the domain where a quantity is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Enumeration or expansion would exceed a configured size cap.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// A precondition on a strategy was violated (currently: inadmissibility).
class ContractError : public Error {
public:
    ContractError(const std::string& what, std::size_t witness)
        : Error(what), witness_(witness) {}

    /// Original label of the symbol no reconstruction covers.
    std::size_t witness() const noexcept { return witness_; }

private:
    std::size_t witness_;
};

} // namespace guessrisk
