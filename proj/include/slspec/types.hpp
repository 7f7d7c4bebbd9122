#ifndef SLSPEC_TYPES_HPP
#define SLSPEC_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace slspec {

using cplx = std::complex<double>;

inline bool is_finite(cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax error while parsing an expression. `offset` is the byte position
/// in the source string where the error was detected.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at offset " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::size_t offset;
};

/// Non-finite result while evaluating an expression; carries the binding
/// value of the free variable at which evaluation failed.
class EvalError : public Error {
public:
    EvalError(const std::string& msg, cplx binding)
        : Error(msg), binding(binding) {}
    cplx binding;
};

/// Failure inside the adaptive ODE integrator (step underflow, step budget
/// exhausted, or a potential evaluation error at an interior node).
class IvpError : public Error {
public:
    using Error::Error;
};

/// Requested evaluation point lies inside the guard zone around a zero of
/// the regularizing sinc power, where the inversion formulas blow up.
class GuardZoneError : public Error {
public:
    using Error::Error;
};

/// Argument-principle machinery could not produce a reliable winding
/// number (zero on the contour, or phase steps too coarse after maximal
/// refinement).
class WindingError : public Error {
public:
    using Error::Error;
};

} // namespace slspec

#endif
