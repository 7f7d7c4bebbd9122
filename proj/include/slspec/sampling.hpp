#ifndef SLSPEC_SAMPLING_HPP
#define SLSPEC_SAMPLING_HPP

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "slspec/ivp.hpp"
#include "slspec/problems.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// Method parameters for the regularized sampling scheme. The four
/// boundary-data functions are multiplied by (sin(theta mu)/(theta mu))^m
/// so that they fall into the Paley-Wiener space of exponential type
/// sigma = b + m*theta, where a truncated cardinal series with node
/// spacing pi/sigma reconstructs them.
///
/// `theta == 0` requests the default 1/(N - m), which keeps the first
/// regularizer singularity pi/theta outside the band of interest.
struct SamplingConfig {
    std::size_t N = 40;  // truncation order: nodes j = 0..N
    std::size_t m = 10;  // regularization power, >= 2
    double theta = 0.0;
    double b = 1.0;
    IvpConfig ivp;

    /// Copy with theta resolved to its default when left at 0.
    SamplingConfig resolved() const;
    /// Throws std::invalid_argument unless m >= 2, N > m, theta > 0, b > 0.
    void validate() const;
    double sigma() const { return b + static_cast<double>(m) * theta; }
    double node(std::size_t j) const;  // mu_j = j pi / sigma
};

/// Samples h_kl(mu_j) of the four regularized boundary-data functions,
/// j = 0..N. All four are even in mu, so only j >= 0 is stored; the
/// negative nodes reuse the same values. Immutable once built.
struct SampleTable {
    SamplingConfig config;
    std::string problem_name;
    std::vector<double> nodes;
    std::array<std::vector<cplx>, 4> h; // h11, h12, h21, h22

    // build metadata (not part of the serialized payload except steps)
    std::vector<std::size_t> ivp_steps;
    double build_seconds = 0.0;

    const std::vector<cplx>& samples(int k, int l) const { return h[idx(k, l)]; }
    static std::size_t idx(int k, int l);
};

/// (sin(theta mu)/(theta mu))^m with the removable singularity at mu = 0;
/// small arguments |theta mu| < 1e-4 use a Taylor form to avoid
/// cancellation. Total function, never throws.
cplx sinc_reg(double theta, std::size_t m, cplx mu);

/// sin(z)/z with sinc(0) = 1 (the unregularized cardinal kernel).
cplx cardinal_sinc(cplx z);

/// Solve the base pair at every node mu_j and tabulate
///   h11 = reg * (y_c(b)  - cos(b mu)),   h12 = reg * (y_s(b)  - sin(b mu)/mu),
///   h21 = reg * (y_c'(b) + mu sin(b mu)), h22 = reg * (y_s'(b) - cos(b mu)).
/// `threads` = 0 picks the hardware concurrency; the table contents do not
/// depend on the thread count. IVP failures are rethrown tagged with the
/// failing node index.
SampleTable build_sample_table(const Problem& p, const SamplingConfig& cfg,
                               unsigned threads = 0);

/// Truncated cardinal series for h_kl at any complex mu:
///   sum_{j=-N}^{N} h_kl(mu_j) sinc(sigma (mu - mu_j)),
/// folded over j < 0 by evenness. Within 1e-9/sigma of a node the stored
/// sample is returned unchanged, so the series interpolates bit-exactly.
cplx eval_h(const SampleTable& t, int k, int l, cplx mu);

/// Endpoint solution values recovered from a sample table.
struct EndpointQuad {
    cplx yc;
    cplx ys;
    cplx yc_prime;
    cplx ys_prime;
};

/// Invert the regularization:
///   y_c(b, mu) = h11(mu) reg^-1 + cos(b mu),   etc.
/// Throws GuardZoneError when |reg| < 1e-12, i.e. mu within the guard
/// zone of a nonzero multiple of pi/theta.
EndpointQuad reconstruct_endpoint(const SampleTable& t, cplx mu);

/// Characteristic determinant from endpoint data and the boundary matrix:
///   B(mu) = det [ A(mu) (w1 | w2) ],
///   w1 = (1, 0, y_c, y_c')^T,  w2 = (0, 1, y_s, y_s')^T.
cplx char_det(const Problem& p, cplx mu, const EndpointQuad& v);

/// Approximate characteristic function B_N built from the sample table.
cplx char_function(const Problem& p, const SampleTable& t, cplx mu);

/// Reference characteristic function from a fresh IVP solve at complex mu
/// (no sampling); the oracle against which B_N is checked.
cplx char_function_direct(const Problem& p, cplx mu, const IvpConfig& cfg);

/// Serialize to a deterministic JSON document (17-significant-digit
/// decimals, so doubles round-trip bit-exactly; no timestamps).
std::string table_to_json(const SampleTable& t);
SampleTable table_from_json(const std::string& text);

} // namespace slspec

#endif
