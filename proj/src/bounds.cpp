#include "slspec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Shared tail of the truncation formulas:
//   [1/sqrt(N pi/sigma - |mu|) + 1/sqrt(N pi/sigma + |mu|)]
//   / (pi (pi/sigma)^(m-1) sqrt(1 - 4^(1-m)) (N+1)^(m-1)).
double common_factor(const SamplingConfig& c, double abs_mu) {
    double band = static_cast<double>(c.N) * kPi / c.sigma();
    if (!(abs_mu < band))
        throw std::invalid_argument("bound requires |mu| < N pi / sigma");
    double dm = static_cast<double>(c.m);
    double denom = kPi * std::pow(kPi / c.sigma(), dm - 1.0) *
                   std::sqrt(1.0 - std::pow(4.0, 1.0 - dm)) *
                   std::pow(static_cast<double>(c.N) + 1.0, dm - 1.0);
    double bracket = 1.0 / std::sqrt(band - abs_mu) + 1.0 / std::sqrt(band + abs_mu);
    return bracket / denom;
}

} // namespace

double BoundInputs::beta3_max() const {
    double best = 0.0;
    for (const auto& row : beta3)
        for (double v : row)
            best = std::max(best, v);
    return best;
}

BoundInputs estimate_bound_inputs(const SampleTable& t) {
    BoundInputs bi;
    bi.config = t.config;

    const double dm = static_cast<double>(t.config.m);
    const double theta = t.config.theta;
    const double spacing = kPi / t.config.sigma();
    const std::size_t n = t.nodes.size();
    const double mu_last = t.nodes.back();

    for (int k = 1; k <= 2; ++k) {
        for (int l = 1; l <= 2; ++l) {
            const auto& samples = t.samples(k, l);

            // Trapezoid of |mu^(m-1) h|^2 over [-mu_N, mu_N]; the integrand
            // is even, and vanishes at mu = 0 for m >= 2.
            double integral = 0.0;
            double beta2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double g = std::pow(std::abs(t.nodes[j]), dm - 1.0) * std::abs(samples[j]);
                double weight = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
                integral += weight * g * g * spacing;
                beta2 = std::max(beta2,
                                 std::abs(samples[j]) *
                                     std::pow(1.0 + theta * std::abs(t.nodes[j]), dm));
            }
            integral *= 2.0;

            // Tail: with |h| <= beta2 / (1 + theta mu)^m the substitution
            // u = 1/mu turns the tail integrand into (u + theta)^(-2m),
            // which integrates in closed form.
            double tail = beta2 * beta2 *
                          (std::pow(theta, 1.0 - 2.0 * dm) -
                           std::pow(theta + 1.0 / mu_last, 1.0 - 2.0 * dm)) /
                          (2.0 * dm - 1.0);
            bi.beta3[k - 1][l - 1] = std::sqrt(integral + 2.0 * tail);
        }
    }
    return bi;
}

double truncation_bound(const BoundInputs& bi, int k, int l, cplx mu) {
    return std::abs(std::sin(mu)) * bi.beta3_at(k, l) *
           common_factor(bi.config, std::abs(mu));
}

double truncation_bound(const BoundInputs& bi, cplx mu) {
    return std::abs(std::sin(mu)) * bi.beta3_max() *
           common_factor(bi.config, std::abs(mu));
}

double char_bound(const BoundInputs& bi, cplx mu) {
    if (!bi.beta4)
        throw std::invalid_argument("char_bound requires a calibrated beta4");
    cplx reg = sinc_reg(bi.config.theta, bi.config.m, mu);
    if (std::abs(reg) < 1e-12)
        throw GuardZoneError("char_bound: mu inside the regularizer guard zone");
    return *bi.beta4 * std::abs(std::sin(mu)) / std::abs(reg) *
           common_factor(bi.config, std::abs(mu));
}

double calibrate_beta4(const Problem& p, const SampleTable& t,
                       const std::vector<cplx>& calibration_points) {
    BoundInputs unit;
    unit.config = t.config;
    unit.beta4 = 1.0;

    double best = 0.0;
    for (cplx mu : calibration_points) {
        double shape;
        try {
            shape = char_bound(unit, mu);
        } catch (const GuardZoneError&) {
            continue;
        }
        if (!(shape > 0.0))
            continue; // |sin mu| = 0 carries no information
        cplx approx = char_function(p, t, mu);
        cplx direct = char_function_direct(p, mu, t.config.ivp);
        best = std::max(best, std::abs(direct - approx) / shape);
    }
    if (!(best > 0.0))
        throw std::invalid_argument(
            "calibrate_beta4: no usable calibration points");
    return best;
}

double eigenvalue_error_bound(const BoundInputs& bi, cplx mu_n, int n,
                              double inf_deriv) {
    if (n < 1)
        throw std::invalid_argument("eigenvalue_error_bound: multiplicity n >= 1");
    if (!(inf_deriv > 0.0))
        throw std::invalid_argument("eigenvalue_error_bound: inf_deriv must be positive");
    if (!bi.beta4)
        throw std::invalid_argument("eigenvalue_error_bound requires beta4");
    cplx reg = sinc_reg(bi.config.theta, bi.config.m, mu_n);
    if (std::abs(reg) < 1e-12)
        throw GuardZoneError("eigenvalue_error_bound: mu inside the guard zone");

    double m_fact = 1.0;
    for (std::size_t i = 2; i <= bi.config.m; ++i)
        m_fact *= static_cast<double>(i);

    double whole = m_fact / inf_deriv / std::abs(reg) * std::abs(std::sin(mu_n)) *
                   *bi.beta4 * common_factor(bi.config, std::abs(mu_n));
    return std::pow(whole, 1.0 / static_cast<double>(n));
}

} // namespace slspec
