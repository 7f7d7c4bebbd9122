#include "slspec/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "slspec/bounds.hpp"

namespace slspec {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Estimate of the n-th derivative magnitude of f at z by central finite
// differences (n <= 3), used for the bound diagnostics only.
std::optional<double> nth_derivative_estimate(const CFunc& f, cplx z, int n) {
    double h = 1e-3 * (1.0 + std::abs(z));
    try {
        switch (n) {
        case 1: return std::abs((f(z + h) - f(z - h)) / (2.0 * h));
        case 2: return std::abs((f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h));
        case 3:
            return std::abs((f(z + 2.0 * h) - 2.0 * f(z + h) + 2.0 * f(z - h) -
                             f(z - 2.0 * h)) /
                            (2.0 * h * h * h));
        default: return std::nullopt;
        }
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::vector<cplx> calibration_grid(const SearchRect& rect) {
    std::vector<cplx> pts;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double fx = 0.15 + 0.7 * i / 3.0;
            double fy = 0.15 + 0.7 * j / 3.0;
            pts.emplace_back(rect.re_min + fx * rect.width(),
                             rect.im_min + fy * rect.height());
        }
    return pts;
}

} // namespace

std::vector<ReportRow> make_rows(const RunConfig& cfg, const SpectrumResult& spec,
                                 std::vector<std::string>& warnings) {
    std::vector<ReportRow> rows;
    rows.reserve(spec.eigenvalues.size());

    std::optional<BoundInputs> bi;
    if (cfg.include_bounds && !spec.eigenvalues.empty()) {
        bi = estimate_bound_inputs(spec.table);
        try {
            bi->beta4 = calibrate_beta4(cfg.problem, spec.table, calibration_grid(cfg.rect));
        } catch (const std::exception& e) {
            warnings.push_back(std::string("bound calibration failed: ") + e.what());
            bi.reset();
        }
    }

    int index = 1;
    for (const Eigenvalue& ev : spec.eigenvalues) {
        ReportRow row;
        row.index = index++;
        row.lambda = ev.lambda;
        row.mu = ev.mu;
        row.residual = ev.residual_direct >= 0.0 ? ev.residual_direct : ev.residual;
        row.winding = ev.winding;

        if (bi) {
            CFunc bn = [&](cplx mu) { return char_function(cfg.problem, spec.table, mu); };
            auto deriv = nth_derivative_estimate(bn, ev.mu, std::max(1, ev.winding));
            if (deriv && *deriv > 0.0) {
                try {
                    // Halve the point estimate as a crude stand-in for the
                    // infimum over a small ball.
                    row.error_bound = eigenvalue_error_bound(*bi, ev.mu,
                                                             std::max(1, ev.winding),
                                                             0.5 * *deriv);
                } catch (const std::exception& e) {
                    warnings.push_back("error bound unavailable at mu = " +
                                       fmt_short(ev.mu.real()) + "+" +
                                       fmt_short(ev.mu.imag()) + "i: " + e.what());
                }
            }
        }

        if (cfg.compare_exact) {
            if (cfg.problem.exact_eigenvalue) {
                int best_k = 1;
                double best_d = std::numeric_limits<double>::infinity();
                int k_max = 3 * static_cast<int>(spec.eigenvalues.size()) + 30;
                for (int k = 1; k <= k_max; ++k) {
                    double d = std::abs(cfg.problem.exact_eigenvalue(k) - ev.lambda);
                    if (d < best_d) {
                        best_d = d;
                        best_k = k;
                    }
                }
                row.exact = cfg.problem.exact_eigenvalue(best_k);
            } else if (cfg.problem.exact_char) {
                Eigenvalue polished =
                    refine_zero([&](cplx mu) { return cfg.problem.exact_char(mu); },
                                ev.mu, std::max(1, ev.winding));
                if (polished.converged) {
                    row.exact = polished.lambda;
                } else {
                    warnings.push_back(
                        "exact characteristic root did not polish near mu = " +
                        fmt_short(ev.mu.real()) + "+" + fmt_short(ev.mu.imag()) + "i");
                }
            }
            if (row.exact) {
                row.abs_error = std::abs(*row.exact - ev.lambda);
                double denom = std::abs(*row.exact);
                row.rel_error = denom > 0.0 ? *row.abs_error / denom : *row.abs_error;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_csv(const RunConfig& cfg, const std::vector<ReportRow>& rows) {
    std::string out = "index,lambda_re,lambda_im,mu_re,mu_im,residual,winding";
    if (cfg.include_bounds)
        out += ",error_bound";
    if (cfg.compare_exact)
        out += ",exact_re,exact_im,abs_error,rel_error";
    out += '\n';
    for (const ReportRow& r : rows) {
        out += std::to_string(r.index) + ',' + fmt17(r.lambda.real()) + ',' +
               fmt17(r.lambda.imag()) + ',' + fmt17(r.mu.real()) + ',' +
               fmt17(r.mu.imag()) + ',' + fmt17(r.residual) + ',' +
               std::to_string(r.winding);
        if (cfg.include_bounds)
            out += ',' + (r.error_bound ? fmt17(*r.error_bound) : std::string("nan"));
        if (cfg.compare_exact) {
            if (r.exact)
                out += ',' + fmt17(r.exact->real()) + ',' + fmt17(r.exact->imag()) +
                       ',' + fmt17(*r.abs_error) + ',' + fmt17(*r.rel_error);
            else
                out += ",nan,nan,nan,nan";
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const RunConfig& cfg, const std::vector<ReportRow>& rows,
                        const std::vector<std::string>& warnings) {
    const SamplingConfig sc = cfg.sampling.resolved();
    std::string out = "{\n  \"metadata\": {\n";
    out += "    \"problem\": \"" + cfg.problem.name + "\",\n";
    out += "    \"b\": " + fmt17(cfg.problem.b) + ",\n";
    out += "    \"N\": " + std::to_string(sc.N) + ",\n";
    out += "    \"m\": " + std::to_string(sc.m) + ",\n";
    out += "    \"theta\": " + fmt17(sc.theta) + ",\n";
    out += "    \"sigma\": " + fmt17(sc.sigma()) + ",\n";
    out += "    \"rect\": [" + fmt17(cfg.rect.re_min) + ", " + fmt17(cfg.rect.re_max) +
           ", " + fmt17(cfg.rect.im_min) + ", " + fmt17(cfg.rect.im_max) + "],\n";
    out += std::string("    \"full_plane\": ") + (cfg.full_plane ? "true" : "false") +
           ",\n";
    out += "    \"warnings\": [";
    for (std::size_t i = 0; i < warnings.size(); ++i) {
        if (i)
            out += ", ";
        std::string w = warnings[i];
        for (std::size_t pos = 0; (pos = w.find('"', pos)) != std::string::npos;
             pos += 2)
            w.replace(pos, 1, "\\\"");
        out += '"' + w + '"';
    }
    out += "]\n  },\n  \"eigenvalues\": [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ReportRow& r = rows[i];
        out += i ? ",\n    {" : "\n    {";
        out += "\"index\": " + std::to_string(r.index);
        out += ", \"lambda_re\": " + fmt17(r.lambda.real());
        out += ", \"lambda_im\": " + fmt17(r.lambda.imag());
        out += ", \"mu_re\": " + fmt17(r.mu.real());
        out += ", \"mu_im\": " + fmt17(r.mu.imag());
        out += ", \"residual\": " + fmt17(r.residual);
        out += ", \"winding\": " + std::to_string(r.winding);
        if (r.error_bound)
            out += ", \"error_bound\": " + fmt17(*r.error_bound);
        if (r.exact) {
            out += ", \"exact_re\": " + fmt17(r.exact->real());
            out += ", \"exact_im\": " + fmt17(r.exact->imag());
            out += ", \"abs_error\": " + fmt17(*r.abs_error);
            out += ", \"rel_error\": " + fmt17(*r.rel_error);
        }
        out += '}';
    }
    out += "\n  ]\n}\n";
    return out;
}

std::string render_text(const RunConfig& cfg, const std::vector<ReportRow>& rows,
                        const std::vector<std::string>& warnings) {
    std::string out;
    out += "problem: " + cfg.problem.name + "\n";
    const SamplingConfig sc = cfg.sampling.resolved();
    out += "N = " + std::to_string(sc.N) + ", m = " + std::to_string(sc.m) +
           ", theta = " + fmt_short(sc.theta) + ", sigma = " + fmt_short(sc.sigma()) +
           ", b = " + fmt_short(cfg.problem.b) + "\n";
    out += "eigenvalues found: " + std::to_string(rows.size()) + "\n\n";
    char line[512];
    for (const ReportRow& r : rows) {
        std::snprintf(line, sizeof line, "%3d  lambda = %.15g %+.15gi   |B| = %.3g   n = %d",
                      r.index, r.lambda.real(), r.lambda.imag(), r.residual, r.winding);
        out += line;
        if (r.error_bound) {
            std::snprintf(line, sizeof line, "   bound = %.3g", *r.error_bound);
            out += line;
        }
        if (r.exact) {
            std::snprintf(line, sizeof line, "   exact = %.15g %+.15gi   abs_err = %.3g",
                          r.exact->real(), r.exact->imag(), *r.abs_error);
            out += line;
        }
        out += '\n';
    }
    for (const std::string& w : warnings)
        out += "warning: " + w + "\n";
    return out;
}

std::string render_grid_csv(const Problem& p, const SampleTable& t,
                            const SearchRect& rect, int nx, int ny) {
    std::string out = "re,im,abs_B\n";
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double re = rect.re_min + rect.width() * (nx == 1 ? 0.5 : double(i) / (nx - 1));
            double im = rect.im_min + rect.height() * (ny == 1 ? 0.5 : double(j) / (ny - 1));
            std::string val = "nan";
            try {
                val = fmt17(std::abs(char_function(p, t, cplx(re, im))));
            } catch (const Error&) {
                // guard zone: leave nan
            }
            out += fmt17(re) + ',' + fmt17(im) + ',' + val + '\n';
        }
    }
    return out;
}

} // namespace slspec
