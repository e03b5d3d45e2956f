#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lra {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed problem description (bad indices, missing costs, bad JSON).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Some state has no admissible action, so the system is not viable.
class ViabilityViolation : public Error {
public:
    explicit ViabilityViolation(std::size_t state)
        : Error("viability violated: state " + std::to_string(state) +
                " has no admissible action"),
          state_(state) {}
    std::size_t state() const noexcept { return state_; }

private:
    std::size_t state_;
};

class InadmissibleAction : public Error {
public:
    InadmissibleAction(std::size_t state, std::size_t action)
        : Error("action " + std::to_string(action) + " is not admissible at state " +
                std::to_string(state)),
          state_(state), action_(action) {}
    std::size_t state() const noexcept { return state_; }
    std::size_t action() const noexcept { return action_; }

private:
    std::size_t state_;
    std::size_t action_;
};

class NoCycleDetected : public Error {
public:
    using Error::Error;
};

class EmptySet : public Error {
public:
    using Error::Error;
};

class IterationLimit : public Error {
public:
    using Error::Error;
};

class PrimalInfeasible : public Error {
public:
    using Error::Error;
};

class DualUnbounded : public Error {
public:
    using Error::Error;
};

class InfeasibleCertificate : public Error {
public:
    using Error::Error;
};

class NotPeriodic : public Error {
public:
    using Error::Error;
};

} // namespace lra
