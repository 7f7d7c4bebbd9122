#ifndef SLSPEC_BOUNDS_HPP
#define SLSPEC_BOUNDS_HPP

#include <array>
#include <optional>
#include <vector>

#include "slspec/sampling.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// Inputs for the a-posteriori bound formulas. These are diagnostics:
/// beta3 is estimated from the samples and beta4 calibrated empirically,
/// so the resulting numbers are indicative envelopes, not certified
/// enclosures, and are never used to gate results.
struct BoundInputs {
    SamplingConfig config;
    std::array<std::array<double, 2>, 2> beta3{}; // per (k, l), 0-based
    double beta0 = 1.72; // sinc-envelope constant
    std::optional<double> beta4;

    double beta3_at(int k, int l) const { return beta3[k - 1][l - 1]; }
    double beta3_max() const;
};

/// Estimate beta3(k,l) = ||mu^(m-1) h_kl(mu)||_2 by the trapezoid rule
/// over the stored nodes, extended beyond mu_N by the Paley-Wiener
/// envelope tail (envelope constant fitted from the samples).
BoundInputs estimate_bound_inputs(const SampleTable& t);

/// Cardinal-series truncation-error bound for h_kl at mu, |mu| < N pi /
/// sigma. The square-root terms use |mu| (the bound is stated on the real
/// axis; the substitution is the documented extension off it).
double truncation_bound(const BoundInputs& bi, int k, int l, cplx mu);

/// Same bound with the largest beta3 over the four (k, l).
double truncation_bound(const BoundInputs& bi, cplx mu);

/// Bound on |B - B_N| at mu; requires a calibrated beta4 and mu outside
/// the regularizer guard zone.
double char_bound(const BoundInputs& bi, cplx mu);

/// Fit beta4 as the largest empirical ratio |B(mu) - B_N(mu)| / (formula
/// with beta4 = 1) over the calibration points (guard-zone points are
/// skipped). The direct characteristic values come from fresh IVP solves.
double calibrate_beta4(const Problem& p, const SampleTable& t,
                       const std::vector<cplx>& calibration_points);

/// A-posteriori error bound |mu_N - mu_exact| for a root mu_N of B_N of
/// multiplicity n, given a caller-supplied positive lower bound on the
/// relevant derivative magnitude of B near mu_N.
double eigenvalue_error_bound(const BoundInputs& bi, cplx mu_n, int n,
                              double inf_deriv);

} // namespace slspec

#endif
