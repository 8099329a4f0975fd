#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kerrchaos {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimensionError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

// A documented precondition of an operation was not met by its input.
class ContractViolationError : public Error {
public:
    using Error::Error;
};

// Requested coherent amplitude does not fit into the truncated Fock space.
class TruncationLeakageError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// A matrix function that needs a full-rank argument (log, negative powers)
// met an eigenvalue at or below the support cutoff.
class RankDeficiencyError : public Error {
public:
    RankDeficiencyError(const std::string& what, double eigenvalue)
        : Error(what), eigenvalue_(eigenvalue) {}

    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

// Classical orbit left the finite numbers.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t iteration)
        : Error(what), iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class UndefinedMeasureError : public Error {
public:
    using Error::Error;
};

}  // namespace kerrchaos
