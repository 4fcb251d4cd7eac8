#pragma once

#include <stdexcept>
#include <string>

namespace nettrack {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotSquare : Error {
    explicit NotSquare(const std::string& msg = "matrix is not square") : Error(msg) {}
};

struct NotSymmetric : Error {
    explicit NotSymmetric(const std::string& msg = "matrix is not symmetric") : Error(msg) {}
};

struct NotPSD : Error {
    explicit NotPSD(const std::string& msg = "matrix is not positive semidefinite") : Error(msg) {}
};

struct NonFinite : Error {
    explicit NonFinite(const std::string& msg = "matrix has non-finite entries") : Error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg = "dimension mismatch") : Error(msg) {}
};

struct Singular : Error {
    explicit Singular(const std::string& msg = "matrix is singular") : Error(msg) {}
};

struct EmptySupport : Error {
    explicit EmptySupport(const std::string& msg = "row has empty support") : Error(msg) {}
};

/// Requested operation requires a Schur-stable matrix.
struct Unstable : Error {
    explicit Unstable(const std::string& msg = "dynamics are not stable") : Error(msg) {}
};

struct BadParams : Error {
    explicit BadParams(const std::string& msg = "bad parameters") : Error(msg) {}
};

struct TooLarge : Error {
    explicit TooLarge(const std::string& msg = "problem too large for exhaustive search") : Error(msg) {}
};

struct NotACycle : Error {
    explicit NotACycle(const std::string& msg = "vertex order is not a cycle of the graph") : Error(msg) {}
};

struct ModelMismatch : Error {
    explicit ModelMismatch(const std::string& msg = "plant does not satisfy the required model form") : Error(msg) {}
};

/// The plant's structure does not qualify for any locally computable bound.
struct NotApplicable : Error {
    explicit NotApplicable(const std::string& msg) : Error(msg) {}
};

/// Instability exceeds the achievable capacity; carries the capacity found.
struct CapacityExceeded : Error {
    double capacity;
    bool infinite;
    CapacityExceeded(double cap, bool inf_flag, const std::string& msg)
        : Error(msg), capacity(cap), infinite(inf_flag) {}
};

struct MaxIterations : Error {
    explicit MaxIterations(const std::string& msg = "iteration limit reached") : Error(msg) {}
};

struct NoFeasibleStart : Error {
    explicit NoFeasibleStart(const std::string& msg = "no feasible starting point found") : Error(msg) {}
};

/// Malformed input file or config.
struct SchemaError : Error {
    explicit SchemaError(const std::string& msg) : Error(msg) {}
};

}  // namespace nettrack
