#ifndef SLSPEC_ROOTFIND_HPP
#define SLSPEC_ROOTFIND_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slspec/sampling.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// Axis-aligned search rectangle in the complex mu plane.
struct SearchRect {
    double re_min = 0.0;
    double re_max = 1.0;
    double im_min = -1.0;
    double im_max = 1.0;
    int max_depth = 40;
    int boundary_samples_per_side = 64;

    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    double diameter() const;
    void validate() const;
};

/// A located zero of the characteristic function, with the eigenvalue it
/// induces through lambda = mu^2.
struct Eigenvalue {
    cplx mu;
    cplx lambda;
    double residual = 0.0;        // |f(mu)| after refinement
    double residual_direct = -1.0; // |B(mu)| from a direct IVP solve; < 0 if unset
    int winding = 0;
    int newton_iters = 0;
    bool converged = false;
    std::optional<double> error_bound;
};

using CFunc = std::function<cplx(cplx)>;

/// Total change of arg f around the rectangle boundary divided by 2 pi.
/// Boundary sampling per side starts at rect.boundary_samples_per_side and
/// doubles until every phase increment is below pi/2 (or 2^16 samples are
/// reached, which throws). A boundary sample with |f| < 1e-13 * scale is
/// reported as a zero on the contour.
int winding_number(const CFunc& f, const SearchRect& rect);

/// Vertical strips around the real points k pi/theta (k != 0) that the
/// subdivision must not touch; `spacing` = pi/theta, `radius` the guard
/// half-width. spacing == 0 disables the guards.
struct GuardSpec {
    double spacing = 0.0;
    double radius = 0.0;
};

struct LocalizeOptions {
    double emit_diameter = 1e-3;
    GuardSpec guard;
};

struct LocalizedBox {
    SearchRect box;
    int winding = 0;
    double boundary_scale = 0.0; // median |f| over the final box boundary
};

struct LocalizeResult {
    std::vector<LocalizedBox> boxes;
    std::vector<std::string> warnings;
};

/// Recursive quadrisection by the argument principle: boxes with winding 0
/// are discarded, boxes with winding >= 1 and diameter < emit_diameter are
/// emitted. The winding of a parent must equal the sum over its children;
/// splits landing on a zero are retried at nudged fractions. Boxes that
/// cannot be resolved are reported in `warnings` rather than thrown.
LocalizeResult localize_zeros(const CFunc& f, SearchRect rect,
                              const LocalizeOptions& opts = {});

/// Newton refinement (multiplicity-aware step winding * f/f', derivative by
/// central finite differences) with a Muller fallback when |f| stalls.
/// `converged` is false when 60 iterations pass without meeting the
/// 1e-13 * (1 + |mu|) step criterion; the best iterate is still returned.
Eigenvalue refine_zero(const CFunc& f, cplx mu0, int winding);

struct SpectrumOptions {
    bool full_plane = false; // default searches only Re mu >= 0
    unsigned threads = 0;    // sample-table build parallelism; 0 = auto
    double emit_diameter = 1e-3;
    double residual_tol_factor = 1e-8; // vs. box boundary median
};

struct SpectrumResult {
    std::vector<Eigenvalue> eigenvalues;
    std::vector<std::string> warnings;
    SampleTable table;
};

/// Full pipeline: build the sample table once, localize the zeros of B_N
/// over `rect`, refine each, merge duplicates (including +-mu pairs that
/// induce one lambda), cross-check every root against the direct IVP
/// characteristic function, and sort by |lambda|. Partial failures are
/// collected into `warnings`.
SpectrumResult spectrum(const Problem& p, const SamplingConfig& cfg,
                        const SearchRect& rect, const SpectrumOptions& opts = {});

} // namespace slspec

#endif
