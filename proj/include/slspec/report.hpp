#ifndef SLSPEC_REPORT_HPP
#define SLSPEC_REPORT_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "slspec/config.hpp"
#include "slspec/rootfind.hpp"

namespace slspec {

/// One output row per eigenvalue; optional columns appear when the run
/// asked for bounds / exact comparison.
struct ReportRow {
    int index = 0;
    cplx lambda;
    cplx mu;
    double residual = 0.0;
    int winding = 0;
    std::optional<double> error_bound;
    std::optional<cplx> exact;
    std::optional<double> abs_error;
    std::optional<double> rel_error;
};

/// Assemble rows from a spectrum result: attaches the exact comparison
/// (closed-form eigenvalues, or roots of the exact characteristic
/// function polished from the computed mu) and the a-posteriori bound
/// diagnostics when requested. May append to `warnings`.
std::vector<ReportRow> make_rows(const RunConfig& cfg, const SpectrumResult& spec,
                                 std::vector<std::string>& warnings);

/// Renderers. All floating-point fields are printed with 17 significant
/// digits and the row order is fixed, so identical configs produce
/// byte-identical documents.
std::string render_csv(const RunConfig& cfg, const std::vector<ReportRow>& rows);
std::string render_json(const RunConfig& cfg, const std::vector<ReportRow>& rows,
                        const std::vector<std::string>& warnings);
std::string render_text(const RunConfig& cfg, const std::vector<ReportRow>& rows,
                        const std::vector<std::string>& warnings);

/// |B_N| on an nx-by-ny grid over the rectangle as "re,im,abs_B" CSV
/// lines (guard-zone points print nan), for external plotting.
std::string render_grid_csv(const Problem& p, const SampleTable& t,
                            const SearchRect& rect, int nx, int ny);

} // namespace slspec

#endif
