#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ramsey {

/// Base of every error raised by the solver pipeline. Carries the name of the
/// stage that failed ("model", "checks", "regulator", ...).
class Error : public std::runtime_error {
   public:
    Error(std::string stage, const std::string& what)
        : std::runtime_error(what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

   private:
    std::string stage_;
};

/// The problem instance (or a request against it) is not admissible.
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// A preliminary stabilizability check failed.
class CheckError : public Error {
   public:
    using Error::Error;
};

/// Wrong shape for an operation whose contract needs a particular shape.
class ShapeError : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

/// Model document could not be read or does not follow the schema.
class SchemaError : public Error {
   public:
    using Error::Error;
};

class NumericalError : public Error {
   public:
    using Error::Error;
};

class SingularityError : public NumericalError {
   public:
    SingularityError(std::string stage, const std::string& what, std::ptrdiff_t pivot = -1, double condition = 0.0)
        : NumericalError(std::move(stage), what), pivot_(pivot), condition_(condition) {}

    /// Elimination step at which the pivot vanished, or -1 when not applicable.
    std::ptrdiff_t pivot() const noexcept { return pivot_; }
    /// Condition number estimate, or 0 when not computed.
    double condition() const noexcept { return condition_; }

   private:
    std::ptrdiff_t pivot_;
    double condition_;
};

class DivergenceError : public NumericalError {
   public:
    DivergenceError(std::string stage, const std::string& what, double last_residual)
        : NumericalError(std::move(stage), what), last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

   private:
    double last_residual_;
};

/// A closed loop that should be stable is not.
class InstabilityError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

}  // namespace ramsey
