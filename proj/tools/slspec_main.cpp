#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "slspec/bounds.hpp"
#include "slspec/config.hpp"
#include "slspec/report.hpp"
#include "slspec/rootfind.hpp"

namespace {

unsigned env_threads() {
    const char* v = std::getenv("SLSPEC_THREADS");
    if (!v || !*v)
        return 0; // auto
    long n = std::strtol(v, nullptr, 10);
    return n > 0 ? static_cast<unsigned>(n) : 0;
}

void write_output(const std::string& payload, const std::string& path) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw slspec::Error("cannot open output file '" + path + "'");
    out << payload;
}

int cmd_run(const std::string& config_path, const std::string& output_override,
            const std::string& format_override, const std::string& dump_grid,
            bool verbose) {
    slspec::RunConfig cfg = slspec::load_run_config(config_path);
    if (!output_override.empty())
        cfg.output_path = output_override;
    if (!format_override.empty()) {
        if (format_override != "text" && format_override != "csv" &&
            format_override != "json")
            throw slspec::ConfigError("--format must be text, csv or json");
        cfg.format = format_override;
    }

    for (const std::string& w : cfg.problem.validate())
        std::cerr << "warning: " << w << '\n';

    slspec::SpectrumOptions opts;
    opts.full_plane = cfg.full_plane;
    opts.threads = env_threads();

    if (!dump_grid.empty()) {
        int nx = 0, ny = 0;
        if (std::sscanf(dump_grid.c_str(), "%d,%d", &nx, &ny) != 2 || nx < 1 || ny < 1)
            throw slspec::ConfigError("--dump-grid expects NX,NY");
        slspec::SampleTable t =
            slspec::build_sample_table(cfg.problem, cfg.sampling, opts.threads);
        write_output(slspec::render_grid_csv(cfg.problem, t, cfg.rect, nx, ny),
                     cfg.output_path);
        return 0;
    }

    if (verbose)
        std::cerr << "building sample table (N = " << cfg.sampling.N
                  << ") and searching " << cfg.rect.re_min << ".." << cfg.rect.re_max
                  << " x " << cfg.rect.im_min << ".." << cfg.rect.im_max << "i\n";

    slspec::SpectrumResult spec =
        slspec::spectrum(cfg.problem, cfg.sampling, cfg.rect, opts);
    std::vector<std::string> warnings = spec.warnings;
    std::vector<slspec::ReportRow> rows = slspec::make_rows(cfg, spec, warnings);

    std::string payload;
    if (cfg.format == "csv")
        payload = slspec::render_csv(cfg, rows);
    else if (cfg.format == "json")
        payload = slspec::render_json(cfg, rows, warnings);
    else
        payload = slspec::render_text(cfg, rows, warnings);
    write_output(payload, cfg.output_path);

    if (verbose)
        std::cerr << "table build took " << spec.table.build_seconds << " s\n";
    for (const std::string& w : warnings)
        std::cerr << "warning: " << w << '\n';
    return warnings.empty() ? 0 : 2;
}

int cmd_table(const std::string& config_path, const std::string& output_override) {
    slspec::RunConfig cfg = slspec::load_run_config(config_path);
    slspec::SampleTable t =
        slspec::build_sample_table(cfg.problem, cfg.sampling, env_threads());
    std::string path = output_override;
    if (path.empty())
        path = cfg.output_path;
    if (path.empty())
        path = cfg.problem.name + "-table.json";
    write_output(slspec::table_to_json(t), path);
    std::cout << "nodes: " << t.nodes.size() << "\nbuild time: " << t.build_seconds
              << " s\nwritten: " << path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectra of non-self-adjoint Sturm-Liouville problems via "
                 "regularized sampling"};
    app.require_subcommand(1);

    std::string config_path, output_path, format, dump_grid;
    bool verbose = false;

    CLI::App* run = app.add_subcommand("run", "compute eigenvalues from a config file");
    run->add_option("config", config_path, "JSON run configuration")->required();
    run->add_option("--output", output_path, "write the table here instead of stdout");
    run->add_option("--format", format, "text, csv or json (overrides the config)");
    run->add_option("--dump-grid", dump_grid,
                    "emit |B_N| on an NX,NY grid over the search rectangle instead "
                    "of locating roots");
    run->add_flag("--verbose", verbose, "progress to stderr");

    CLI::App* table = app.add_subcommand("table", "build and cache a sample table");
    table->add_option("config", config_path, "JSON run configuration")->required();
    table->add_option("--output", output_path, "table file path");

    CLI::App* list = app.add_subcommand("list", "list builtin problems");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const std::string& name : slspec::builtin_names())
                std::cout << name << '\n';
            return 0;
        }
        if (table->parsed())
            return cmd_table(config_path, output_path);
        return cmd_run(config_path, output_path, format, dump_grid, verbose);
    } catch (const slspec::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
