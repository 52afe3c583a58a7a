#pragma once

#include <stdexcept>
#include <string>

namespace qca {

// Error taxonomy shared by every module. The CLI maps these onto its exit-code
// contract: configuration-class errors exit 2, numerical-contract violations
// exit 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Index or label outside the declared lattice bounds.
struct BoundsError : Error {
    using Error::Error;
};

// Operator/vector dimension mismatch.
struct ShapeError : Error {
    using Error::Error;
};

// Parameter outside its mathematical domain (e.g. c*kappa > 1, or a mass
// phase requested where sin(theta) = 0).
struct DomainError : Error {
    using Error::Error;
};

// Hilbert-space dimension exceeds the configured amplitude budget.
struct BudgetError : Error {
    using Error::Error;
};

// Invalid run configuration (violated precondition of a verification).
struct ConfigError : Error {
    using Error::Error;
};

// A numerical contract was violated at run time (broken unitarity, NaNs, ...).
struct NumericalError : Error {
    using Error::Error;
};

} // namespace qca
