#pragma once

#include <stdexcept>
#include <string>

namespace nlg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Matrix or state has the wrong size for the requested operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

// A computed quantity violated a numeric invariant (non-Hermitian state,
// probability outside [0,1], complex residue in a real expectation, ...).
class IntegrityError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, long iterations, double worst_violation)
        : Error(what), iterations_(iterations), worst_violation_(worst_violation) {}

    long iterations() const noexcept { return iterations_; }
    double worst_violation() const noexcept { return worst_violation_; }

private:
    long iterations_;
    double worst_violation_;
};

// Score function is not a member of the depolarizing polynomial family.
class ModelMismatchError : public Error {
public:
    using Error::Error;
};

// Zero-gap configuration where kappa and related ratios are undefined.
class DegenerateConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace nlg
