#ifndef SLSPEC_IVP_HPP
#define SLSPEC_IVP_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "slspec/expr.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// Tolerances and step-size limits for the adaptive integrator.
/// `initial_step == 0` means "span / 100".
struct IvpConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double initial_step = 0.0;
    double min_step = 1e-14;
    std::size_t max_steps = 1'000'000;

    void validate(double span) const;
};

/// Endpoint data of the two base solutions at x = b: y_c has initial data
/// (1, 0), y_s has (0, 1). Their Wronskian y_c·y_s' - y_c'·y_s is
/// identically 1, which wronskian() exposes for testing.
struct BaseSolution {
    cplx yc_end;
    cplx yc_prime_end;
    cplx ys_end;
    cplx ys_prime_end;
    std::size_t steps_taken = 0;
    double max_est_local_error = 0.0;

    cplx wronskian() const { return yc_end * ys_prime_end - yc_prime_end * ys_end; }
};

/// State vector for the generic integrator; complex-valued throughout.
using State = std::vector<cplx>;

/// dy/dx = f(x, y); writes the derivative into `dy` (pre-sized to y.size()).
using DerivFn = std::function<void(double x, const State& y, State& dy)>;

struct IntegrationResult {
    State y;
    std::size_t steps_taken = 0;
    double max_est_local_error = 0.0;
};

/// Adaptive Runge-Kutta-Fehlberg 4(5) over [x0, x1]. A step is accepted
/// when the embedded error estimate is at most max(abs_tol, rel_tol*|y|);
/// the step-size update factor is clamped to [0.1, 5] and the last step is
/// shortened to land exactly on x1. Throws IvpError on step underflow or
/// when max_steps is exhausted.
IntegrationResult rkf45_integrate(const DerivFn& f, State y0, double x0, double x1,
                                  const IvpConfig& cfg);

/// Integrate both base problems for -y'' + q(x) y = mu^2 y over [0, b] in
/// one lockstep 4-dimensional system (shared step points, shared error
/// control) and return the endpoint values.
///
/// If q is singular at x = 0 the integration starts at 1e-10*b, with the
/// initial data advanced by one explicit Euler micro-step; adequate for
/// mildly singular potentials only.
BaseSolution solve_base_pair(const Expr& q, double b, cplx mu, const IvpConfig& cfg);

} // namespace slspec

#endif
