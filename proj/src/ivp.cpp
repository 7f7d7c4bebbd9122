#include "slspec/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace slspec {

namespace {

// Fehlberg's original 4(5) coefficients; the rational forms are listed in
// docs/rkf45-tableau.md.
constexpr double kC2 = 1.0 / 4.0, kC3 = 3.0 / 8.0, kC4 = 12.0 / 13.0, kC5 = 1.0,
                 kC6 = 1.0 / 2.0;

constexpr double kA21 = 1.0 / 4.0;
constexpr double kA31 = 3.0 / 32.0, kA32 = 9.0 / 32.0;
constexpr double kA41 = 1932.0 / 2197.0, kA42 = -7200.0 / 2197.0, kA43 = 7296.0 / 2197.0;
constexpr double kA51 = 439.0 / 216.0, kA52 = -8.0, kA53 = 3680.0 / 513.0,
                 kA54 = -845.0 / 4104.0;
constexpr double kA61 = -8.0 / 27.0, kA62 = 2.0, kA63 = -3544.0 / 2565.0,
                 kA64 = 1859.0 / 4104.0, kA65 = -11.0 / 40.0;

// 5th-order weights (used to advance) and the 5th-minus-4th difference
// (used for the local error estimate).
constexpr double kB51 = 16.0 / 135.0, kB53 = 6656.0 / 12825.0, kB54 = 28561.0 / 56430.0,
                 kB55 = -9.0 / 50.0, kB56 = 2.0 / 55.0;
constexpr double kE1 = 1.0 / 360.0, kE3 = -128.0 / 4275.0, kE4 = -2197.0 / 75240.0,
                 kE5 = 1.0 / 50.0, kE6 = 2.0 / 55.0;

double inf_norm(const State& y) {
    double n = 0.0;
    for (cplx v : y)
        n = std::max(n, std::abs(v));
    return n;
}

bool all_finite(const State& y) {
    for (cplx v : y)
        if (!is_finite(v))
            return false;
    return true;
}

} // namespace

void IvpConfig::validate(double span) const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw std::invalid_argument("ivp tolerances must be positive");
    double h0 = initial_step > 0.0 ? initial_step : span / 100.0;
    if (!(min_step > 0.0) || !(min_step < h0))
        throw std::invalid_argument("ivp requires 0 < min_step < initial_step");
    if (!(h0 <= span))
        throw std::invalid_argument("ivp initial_step exceeds the integration span");
    if (max_steps == 0)
        throw std::invalid_argument("ivp max_steps must be positive");
}

IntegrationResult rkf45_integrate(const DerivFn& f, State y0, double x0, double x1,
                                  const IvpConfig& cfg) {
    if (!(x1 > x0))
        throw std::invalid_argument("rkf45_integrate requires x1 > x0");
    cfg.validate(x1 - x0);

    const std::size_t n = y0.size();
    State y = std::move(y0);
    State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), ytmp(n), ynew(n);

    double x = x0;
    double h = cfg.initial_step > 0.0 ? cfg.initial_step : (x1 - x0) / 100.0;
    std::size_t accepted = 0;
    std::size_t attempts = 0;
    double max_err = 0.0;

    while (x < x1) {
        bool last = false;
        if (x + h >= x1) {
            h = x1 - x;
            last = true;
        }
        if (++attempts > cfg.max_steps)
            throw IvpError("rkf45: step budget exhausted (" +
                           std::to_string(cfg.max_steps) + " attempts)");

        f(x, y, k1);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA21 * k1[i]);
        f(x + kC2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
        f(x + kC3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
        f(x + kC4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
        f(x + kC5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] =
                y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] +
                            kA65 * k5[i]);
        f(x + kC6 * h, ytmp, k6);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ynew[i] = y[i] + h * (kB51 * k1[i] + kB53 * k3[i] + kB54 * k4[i] +
                                  kB55 * k5[i] + kB56 * k6[i]);
            cplx d = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                          kE6 * k6[i]);
            err = std::max(err, std::abs(d));
        }

        double tol = std::max(cfg.abs_tol, cfg.rel_tol * inf_norm(y));
        bool usable = std::isfinite(err) && all_finite(ynew);
        if (usable && err <= tol) {
            x = last ? x1 : x + h;
            y.swap(ynew);
            ++accepted;
            max_err = std::max(max_err, err);
        }

        // On a non-finite trial step shrink maximally and retry.
        double factor = 0.1;
        if (usable)
            factor = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
        factor = std::clamp(factor, 0.1, 5.0);
        h *= factor;
        if (h < cfg.min_step) {
            if (x >= x1)
                break;
            throw IvpError("rkf45: step size underflow at x = " + std::to_string(x));
        }
    }

    return IntegrationResult{std::move(y), accepted, max_err};
}

BaseSolution solve_base_pair(const Expr& q, double b, cplx mu, const IvpConfig& cfg) {
    if (!(b > 0.0))
        throw std::invalid_argument("solve_base_pair requires b > 0");
    cfg.validate(b);

    const cplx mu2 = mu * mu;
    auto deriv = [&q, mu2](double x, const State& y, State& dy) {
        cplx qx;
        try {
            qx = q.eval(cplx(x, 0.0));
        } catch (const EvalError& e) {
            throw IvpError("potential evaluation failed at x = " + std::to_string(x) +
                           ": " + e.what());
        }
        cplx w = qx - mu2;
        dy[0] = y[1];
        dy[1] = w * y[0];
        dy[2] = y[3];
        dy[3] = w * y[2];
    };

    // Lockstep state: (y_c, y_c', y_s, y_s').
    State y0 = {cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)};
    double x0 = 0.0;

    if (!evaluable_at(q, cplx(0.0))) {
        // Singular potential at the left endpoint: offset the start and
        // advance the exact initial data by one explicit Euler micro-step,
        // with the second-derivative term taken at the offset point.
        x0 = 1e-10 * b;
        cplx q0;
        try {
            q0 = q.eval(cplx(x0, 0.0));
        } catch (const EvalError&) {
            throw IvpError("potential not evaluable near x = 0");
        }
        cplx w = q0 - mu2;
        State y1(4);
        y1[0] = y0[0] + x0 * y0[1];
        y1[1] = y0[1] + x0 * w * y0[0];
        y1[2] = y0[2] + x0 * y0[3];
        y1[3] = y0[3] + x0 * w * y0[2];
        y0 = std::move(y1);
    }

    IntegrationResult r = rkf45_integrate(deriv, std::move(y0), x0, b, cfg);
    BaseSolution out{r.y[0], r.y[1], r.y[2], r.y[3], r.steps_taken, r.max_est_local_error};
    if (!is_finite(out.yc_end) || !is_finite(out.yc_prime_end) || !is_finite(out.ys_end) ||
        !is_finite(out.ys_prime_end))
        throw IvpError("solve_base_pair: non-finite endpoint values");
    return out;
}

} // namespace slspec
