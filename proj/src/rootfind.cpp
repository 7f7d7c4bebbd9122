#include "slspec/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>

namespace slspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_box(const SearchRect& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "[%g, %g] x [%g, %g]", r.re_min, r.re_max, r.im_min,
                  r.im_max);
    return buf;
}

std::string fmt_cplx(cplx z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g%+gi", z.real(), z.imag());
    return buf;
}

struct BoundaryScan {
    int winding = 0;
    double median_abs = 0.0;
};

// One side of the contour: samples at a + (b-a) * k/n, k = 0..n-1 (the
// end corner belongs to the next side).
struct Side {
    cplx a, b;
    int n = 0;
    std::vector<cplx> fvals;
};

void sample_side(const CFunc& f, Side& s, int n) {
    std::vector<cplx> vals(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        // Reuse the previous level when doubling: even indices coincide.
        if (s.n > 0 && n == 2 * s.n && k % 2 == 0) {
            vals[k] = s.fvals[k / 2];
            continue;
        }
        double t = static_cast<double>(k) / n;
        vals[k] = f(s.a + (s.b - s.a) * t);
    }
    s.n = n;
    s.fvals = std::move(vals);
}

BoundaryScan scan_boundary(const CFunc& f, const SearchRect& rect) {
    const cplx c0(rect.re_min, rect.im_min), c1(rect.re_max, rect.im_min),
        c2(rect.re_max, rect.im_max), c3(rect.re_min, rect.im_max);
    std::array<Side, 4> sides{Side{c0, c1}, Side{c1, c2}, Side{c2, c3}, Side{c3, c0}};
    const int n0 = std::max(4, rect.boundary_samples_per_side);
    for (auto& s : sides)
        sample_side(f, s, n0);

    for (int pass = 0;; ++pass) {
        if (pass > 64)
            throw WindingError("winding_number: refinement did not settle");

        std::vector<double> mags;
        for (const auto& s : sides)
            for (cplx v : s.fvals)
                mags.push_back(std::abs(v));
        std::vector<double> tmp = mags;
        std::nth_element(tmp.begin(), tmp.begin() + tmp.size() / 2, tmp.end());
        double median = tmp[tmp.size() / 2];
        for (double m : mags)
            if (m < 1e-13 * median)
                throw WindingError("winding_number: zero of f on the contour of " +
                                   fmt_box(rect));

        // Walk the closed polygon and accumulate principal-branch phase
        // increments; any step >= pi/2 means the owning side is too coarse.
        double total = 0.0;
        int bad_side = -1;
        for (int si = 0; si < 4 && bad_side < 0; ++si) {
            const auto& s = sides[si];
            for (int k = 0; k < s.n; ++k) {
                cplx cur = s.fvals[k];
                cplx nxt = (k + 1 < s.n) ? s.fvals[k + 1] : sides[(si + 1) % 4].fvals[0];
                double d = std::arg(nxt / cur);
                if (!(std::abs(d) < kPi / 2.0)) {
                    bad_side = si;
                    break;
                }
                total += d;
            }
        }
        if (bad_side >= 0) {
            Side& s = sides[bad_side];
            if (2 * s.n > 65536)
                throw WindingError(
                    "winding_number: phase increments stay too coarse on " +
                    fmt_box(rect) + " after 2^16 samples per side");
            sample_side(f, s, 2 * s.n);
            continue;
        }

        double w = total / (2.0 * kPi);
        long rounded = std::lround(w);
        if (std::abs(w - static_cast<double>(rounded)) > 0.25)
            throw WindingError("winding_number: phase sum " + std::to_string(w) +
                               " is not near an integer on " + fmt_box(rect));
        return BoundaryScan{static_cast<int>(rounded), median};
    }
}

} // namespace

double SearchRect::diameter() const { return std::hypot(width(), height()); }

void SearchRect::validate() const {
    if (!(re_min < re_max) || !(im_min < im_max))
        throw std::invalid_argument("search rectangle is empty or inverted");
    if (max_depth < 1 || boundary_samples_per_side < 4)
        throw std::invalid_argument("search rectangle limits out of range");
}

int winding_number(const CFunc& f, const SearchRect& rect) {
    rect.validate();
    return scan_boundary(f, rect).winding;
}

namespace {

// Split fractions tried in order when a subdivision line lands on a zero
// or produces an inconsistent winding sum.
constexpr std::array<std::pair<double, double>, 6> kSplitFractions = {{
    {0.5, 0.5},
    {0.53, 0.47},
    {0.47, 0.53},
    {0.56, 0.44},
    {0.44, 0.56},
    {0.515, 0.485},
}};

struct Localizer {
    const CFunc& f;
    const LocalizeOptions& opts;
    std::vector<LocalizedBox> boxes;
    std::vector<std::string> warnings;

    void process(const SearchRect& box, int winding, double scale, int depth) {
        if (winding == 0)
            return;
        if (winding < 0) {
            warnings.push_back("negative winding " + std::to_string(winding) + " in " +
                               fmt_box(box) + " (pole inside?); box discarded");
            return;
        }
        if (box.diameter() < opts.emit_diameter) {
            boxes.push_back(LocalizedBox{box, winding, scale});
            return;
        }
        if (depth >= box.max_depth) {
            warnings.push_back("max depth reached with winding " +
                               std::to_string(winding) + " in " + fmt_box(box) +
                               "; unresolved cluster");
            return;
        }

        for (auto [fx, fy] : kSplitFractions) {
            double xm = box.re_min + fx * box.width();
            double ym = box.im_min + fy * box.height();
            std::array<SearchRect, 4> kids = {box, box, box, box};
            kids[0].re_max = xm;
            kids[0].im_max = ym;
            kids[1].re_min = xm;
            kids[1].im_max = ym;
            kids[2].re_min = xm;
            kids[2].im_min = ym;
            kids[3].re_max = xm;
            kids[3].im_min = ym;

            std::array<BoundaryScan, 4> scans;
            bool ok = true;
            int sum = 0;
            for (int i = 0; i < 4 && ok; ++i) {
                try {
                    scans[i] = scan_boundary(f, kids[i]);
                    sum += scans[i].winding;
                } catch (const WindingError&) {
                    ok = false;
                }
            }
            // The argument principle is additive under subdivision; a
            // mismatch means a contour artifact, so re-split elsewhere.
            if (!ok || sum != winding)
                continue;
            for (int i = 0; i < 4; ++i)
                process(kids[i], scans[i].winding, scans[i].median_abs, depth + 1);
            return;
        }
        warnings.push_back("could not subdivide " + fmt_box(box) + " (winding " +
                           std::to_string(winding) + ") after split retries");
    }
};

} // namespace

LocalizeResult localize_zeros(const CFunc& f, SearchRect rect,
                              const LocalizeOptions& opts) {
    rect.validate();

    // Carve the rectangle into vertical slabs that keep clear of the
    // regularizer guard strips around k pi/theta.
    std::vector<SearchRect> slabs;
    std::vector<std::string> warnings;
    if (opts.guard.spacing > 0.0) {
        double r = opts.guard.radius;
        std::vector<std::pair<double, double>> strips;
        long k_lo = std::lround(std::floor(rect.re_min / opts.guard.spacing)) - 1;
        long k_hi = std::lround(std::ceil(rect.re_max / opts.guard.spacing)) + 1;
        for (long k = k_lo; k <= k_hi; ++k) {
            if (k == 0)
                continue;
            double g = static_cast<double>(k) * opts.guard.spacing;
            if (g + r <= rect.re_min || g - r >= rect.re_max)
                continue;
            strips.emplace_back(g - r, g + r);
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "guard zone [%g, %g] around %ld*pi/theta excluded from the search",
                          g - r, g + r, k);
            warnings.push_back(buf);
        }
        std::sort(strips.begin(), strips.end());
        double lo = rect.re_min;
        for (auto [a, b] : strips) {
            if (a > lo) {
                SearchRect s = rect;
                s.re_min = lo;
                s.re_max = a;
                slabs.push_back(s);
            }
            lo = std::max(lo, b);
        }
        if (lo < rect.re_max) {
            SearchRect s = rect;
            s.re_min = lo;
            slabs.push_back(s);
        }
    } else {
        slabs.push_back(rect);
    }

    Localizer lz{f, opts, {}, std::move(warnings)};
    for (const SearchRect& slab : slabs) {
        // A zero sitting exactly on the requested boundary makes the
        // winding ill-defined; retry with slightly grown edges.
        BoundaryScan scan;
        bool have = false;
        SearchRect box = slab;
        for (int attempt = 0; attempt < 4 && !have; ++attempt) {
            try {
                scan = scan_boundary(f, box);
                have = true;
            } catch (const WindingError& e) {
                if (attempt == 3) {
                    lz.warnings.push_back("slab " + fmt_box(slab) +
                                          " skipped: " + e.what());
                    break;
                }
                double eps = slab.diameter() * 1e-5 * (attempt + 1);
                box.im_min -= eps;
                box.im_max += eps;
                box.re_min -= eps; // slab cuts leave radius-sized margins, so a
                box.re_max += eps; // tiny outward nudge cannot re-enter a strip
            }
        }
        if (have)
            lz.process(box, scan.winding, scan.median_abs, 0);
    }
    return LocalizeResult{std::move(lz.boxes), std::move(lz.warnings)};
}

namespace {

cplx muller_step(const std::deque<std::pair<cplx, cplx>>& hist) {
    const auto& [x0, f0] = hist[0];
    const auto& [x1, f1] = hist[1];
    const auto& [x2, f2] = hist[2];
    cplx q = (x2 - x1) / (x1 - x0);
    cplx a = q * f2 - q * (1.0 + q) * f1 + q * q * f0;
    cplx b = (2.0 * q + 1.0) * f2 - (1.0 + q) * (1.0 + q) * f1 + q * q * f0;
    cplx c = (1.0 + q) * f2;
    cplx d = std::sqrt(b * b - 4.0 * a * c);
    cplx den = std::abs(b + d) >= std::abs(b - d) ? b + d : b - d;
    if (den == cplx(0.0))
        return x2 + (x2 - x1);
    return x2 - (x2 - x1) * (2.0 * c / den);
}

} // namespace

Eigenvalue refine_zero(const CFunc& f, cplx mu0, int winding) {
    const double w = static_cast<double>(std::max(1, winding));

    Eigenvalue out;
    out.winding = winding;

    cplx mu = mu0;
    cplx fmu;
    try {
        fmu = f(mu);
    } catch (const Error&) {
        out.mu = mu0;
        out.lambda = mu0 * mu0;
        out.residual = std::numeric_limits<double>::infinity();
        return out;
    }

    cplx best_mu = mu;
    double best_abs = std::abs(fmu);
    std::deque<std::pair<cplx, cplx>> hist{{mu, fmu}};
    int stall = 0;
    bool muller = false;
    bool converged = false;
    int iters = 0;

    for (int it = 0; it < 60; ++it) {
        ++iters;
        cplx mu_next;
        if (!muller) {
            double h = 1e-7 * (1.0 + std::abs(mu));
            cplx fp;
            try {
                fp = (f(mu + h) - f(mu - h)) / (2.0 * h);
            } catch (const Error&) {
                fp = cplx(0.0);
            }
            if (fp == cplx(0.0) || !is_finite(fp)) {
                muller = true;
            } else {
                mu_next = mu - w * fmu / fp;
            }
        }
        if (muller) {
            if (hist.size() >= 3) {
                mu_next = muller_step(hist);
            } else {
                double h = 1e-7 * (1.0 + std::abs(mu));
                mu_next = mu + cplx(0.7 * h, 0.3 * h);
            }
        }
        if (!is_finite(mu_next))
            break;

        cplx f_next;
        try {
            f_next = f(mu_next);
        } catch (const Error&) {
            break;
        }

        double step = std::abs(mu_next - mu);
        if (std::abs(f_next) < best_abs) {
            best_abs = std::abs(f_next);
            best_mu = mu_next;
            stall = 0;
        } else {
            ++stall;
        }
        hist.emplace_back(mu_next, f_next);
        if (hist.size() > 3)
            hist.pop_front();
        mu = mu_next;
        fmu = f_next;

        if (step < 1e-13 * (1.0 + std::abs(mu))) {
            converged = true;
            break;
        }
        if (!muller && stall >= 5) {
            muller = true;
            stall = 0;
        }
    }

    if (converged) {
        out.mu = mu;
        out.residual = std::abs(fmu);
    } else {
        out.mu = best_mu;
        out.residual = best_abs;
    }
    out.lambda = out.mu * out.mu;
    out.newton_iters = iters;
    out.converged = converged;
    return out;
}

SpectrumResult spectrum(const Problem& p, const SamplingConfig& cfg,
                        const SearchRect& rect_in, const SpectrumOptions& opts) {
    rect_in.validate();

    SpectrumResult result;
    result.table = build_sample_table(p, cfg, opts.threads);
    const SampleTable& t = result.table;
    const SamplingConfig& rc = t.config;

    CFunc bn = [&p, &t](cplx mu) { return char_function(p, t, mu); };

    SearchRect rect = rect_in;
    if (!opts.full_plane && rect.re_min < 0.0) {
        // +-mu induce the same lambda; by default only the right half-plane
        // is searched (full_plane covers boundary matrices that are not
        // even in mu).
        rect.re_min = 0.0;
        if (!(rect.re_min < rect.re_max)) {
            result.warnings.push_back(
                "search rectangle lies entirely in Re mu < 0; nothing searched "
                "(set full_plane to search it)");
            return result;
        }
    }

    LocalizeOptions lo;
    lo.emit_diameter = opts.emit_diameter;
    lo.guard.spacing = kPi / rc.theta;
    lo.guard.radius = 1e-6 * kPi / rc.theta;
    LocalizeResult loc = localize_zeros(bn, rect, lo);
    result.warnings.insert(result.warnings.end(), loc.warnings.begin(),
                           loc.warnings.end());

    struct Candidate {
        Eigenvalue ev;
        double scale;
    };
    std::vector<Candidate> cands;
    for (const LocalizedBox& box : loc.boxes) {
        cplx center(0.5 * (box.box.re_min + box.box.re_max),
                    0.5 * (box.box.im_min + box.box.im_max));
        Eigenvalue ev = refine_zero(bn, center, box.winding);
        if (!ev.converged)
            result.warnings.push_back("root near " + fmt_cplx(center) +
                                      " did not converge (best residual " +
                                      std::to_string(ev.residual) + ")");
        bool inside = ev.mu.real() >= box.box.re_min - 0.1 * box.box.width() &&
                      ev.mu.real() <= box.box.re_max + 0.1 * box.box.width() &&
                      ev.mu.imag() >= box.box.im_min - 0.1 * box.box.height() &&
                      ev.mu.imag() <= box.box.im_max + 0.1 * box.box.height();
        if (!inside)
            result.warnings.push_back("refined root " + fmt_cplx(ev.mu) +
                                      " escaped its localization box " +
                                      fmt_box(box.box));
        if (ev.residual > opts.residual_tol_factor * box.boundary_scale)
            result.warnings.push_back(
                "residual " + std::to_string(ev.residual) + " at mu = " +
                fmt_cplx(ev.mu) + " exceeds tolerance " +
                std::to_string(opts.residual_tol_factor * box.boundary_scale));
        cands.push_back(Candidate{ev, box.boundary_scale});
    }

    // Merge coincident roots, then identical eigenvalues (a +-mu pair maps
    // to a single lambda).
    std::vector<Candidate> merged;
    for (const Candidate& c : cands) {
        bool dup = false;
        for (Candidate& kept : merged) {
            if (std::abs(c.ev.mu - kept.ev.mu) <
                    1e-8 * (1.0 + std::abs(c.ev.mu)) ||
                std::abs(c.ev.lambda - kept.ev.lambda) <
                    1e-8 * (1.0 + std::abs(c.ev.lambda))) {
                if (c.ev.residual < kept.ev.residual)
                    kept = c;
                dup = true;
                break;
            }
        }
        if (!dup)
            merged.push_back(c);
    }

    for (Candidate& c : merged) {
        try {
            c.ev.residual_direct =
                std::abs(char_function_direct(p, c.ev.mu, rc.ivp));
            if (c.ev.residual_direct > 1e-3 * c.scale)
                result.warnings.push_back(
                    "direct characteristic residual " +
                    std::to_string(c.ev.residual_direct) + " at mu = " +
                    fmt_cplx(c.ev.mu) + " is large; possible spurious root");
        } catch (const Error& e) {
            result.warnings.push_back("direct residual check failed at mu = " +
                                      fmt_cplx(c.ev.mu) + ": " + e.what());
        }
        result.eigenvalues.push_back(c.ev);
    }

    std::sort(result.eigenvalues.begin(), result.eigenvalues.end(),
              [](const Eigenvalue& a, const Eigenvalue& b) {
                  double na = std::abs(a.lambda), nb = std::abs(b.lambda);
                  if (na != nb)
                      return na < nb;
                  if (a.lambda.real() != b.lambda.real())
                      return a.lambda.real() < b.lambda.real();
                  return a.lambda.imag() < b.lambda.imag();
              });
    return result;
}

} // namespace slspec
