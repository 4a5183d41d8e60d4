/**
 * @file  errors.hpp
 * @brief Exception hierarchy shared by every acphase module.
 *
 * The CLI maps these onto exit codes: ConfigError -> 3, NumericalError -> 4.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace acphase {

/** Base for all library errors. */
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Missing/unknown parameter, schema violation, invalid mode indices. */
class ConfigError : public Error {
public:
    using Error::Error;
};

/** Argument outside the domain of an operation (negative geometry, point outside a guide). */
class DomainError : public Error {
public:
    using Error::Error;
};

/** A coupling of the wrong kind was passed (e.g. a charge to the AC connection). */
class TypeMisuseError : public Error {
public:
    using Error::Error;
};

/** Adaptive quadrature failed to reach tolerance. */
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, int segment, double error_estimate)
        : Error(what), segment_(segment), error_estimate_(error_estimate) {}

    int segment() const noexcept { return segment_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    int segment_;
    double error_estimate_;
};

/** phi(t0) is not of the form A cos(w t0) + B sin(w t0). */
class ModelViolationError : public Error {
public:
    ModelViolationError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace acphase
