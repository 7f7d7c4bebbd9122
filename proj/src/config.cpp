#include "slspec/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace slspec {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ConfigError("config field '" + field + "': " + msg);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key))
        fail(path.empty() ? key : path + "." + key, "missing");
    return obj.at(key);
}

double get_number(const json& obj, const std::string& key, const std::string& path,
                  double fallback, bool required = false) {
    std::string full = path.empty() ? key : path + "." + key;
    if (!obj.contains(key)) {
        if (required)
            fail(full, "missing");
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number())
        fail(full, "expected a number");
    return v.get<double>();
}

Expr parse_expr_field(const json& v, const std::string& field, const char* free_var) {
    if (!v.is_string())
        fail(field, "expected an expression string");
    try {
        return Expr::parse(v.get<std::string>(), free_var);
    } catch (const ParseError& e) {
        fail(field, e.what());
    } catch (const std::invalid_argument& e) {
        fail(field, e.what());
    }
}

Problem parse_problem(const json& v) {
    if (v.is_string()) {
        try {
            return builtin(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
            fail("problem", e.what());
        }
    }
    if (!v.is_object())
        fail("problem", "expected a builtin name or an inline problem object");

    if (v.contains("builtin")) {
        Problem p;
        try {
            p = builtin(require(v, "builtin", "problem").get<std::string>());
        } catch (const std::invalid_argument& e) {
            fail("problem.builtin", e.what());
        }
        if (v.contains("b")) { // e.g. a different truncation length gamma
            p.b = get_number(v, "b", "problem", p.b);
            if (!(p.b > 0.0))
                fail("problem.b", "must be positive");
        }
        return p;
    }

    Problem p;
    p.name = v.value("name", "inline");
    p.b = get_number(v, "b", "problem", 0.0, /*required=*/true);
    if (!(p.b > 0.0))
        fail("problem.b", "must be positive");
    p.q = parse_expr_field(require(v, "q", "problem"), "problem.q", "x");
    const json& rows = require(v, "A", "problem");
    if (!rows.is_array() || rows.size() != 2)
        fail("problem.A", "expected 2 rows");
    for (int r = 0; r < 2; ++r) {
        const json& row = rows.at(r);
        if (!row.is_array() || row.size() != 4)
            fail("problem.A[" + std::to_string(r) + "]", "expected 4 entries");
        for (int c = 0; c < 4; ++c)
            p.boundary[r][c] = parse_expr_field(
                row.at(c),
                "problem.A[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                "mu");
    }
    return p;
}

} // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config root must be a JSON object");

    RunConfig cfg;
    cfg.problem = parse_problem(require(doc, "problem", ""));

    const json& js = require(doc, "sampling", "");
    cfg.sampling.N = static_cast<std::size_t>(
        get_number(js, "N", "sampling", 40.0, /*required=*/true));
    cfg.sampling.m = static_cast<std::size_t>(
        get_number(js, "m", "sampling", 10.0, /*required=*/true));
    cfg.sampling.theta = get_number(js, "theta", "sampling", 0.0);
    cfg.sampling.b = cfg.problem.b;
    try {
        cfg.sampling.resolved().validate();
    } catch (const std::invalid_argument& e) {
        fail("sampling", e.what());
    }

    if (doc.contains("ivp")) {
        const json& ji = doc.at("ivp");
        cfg.sampling.ivp.abs_tol = get_number(ji, "abs_tol", "ivp", cfg.sampling.ivp.abs_tol);
        cfg.sampling.ivp.rel_tol = get_number(ji, "rel_tol", "ivp", cfg.sampling.ivp.rel_tol);
        cfg.sampling.ivp.initial_step =
            get_number(ji, "initial_step", "ivp", cfg.sampling.ivp.initial_step);
        cfg.sampling.ivp.min_step = get_number(ji, "min_step", "ivp", cfg.sampling.ivp.min_step);
        cfg.sampling.ivp.max_steps = static_cast<std::size_t>(get_number(
            ji, "max_steps", "ivp", static_cast<double>(cfg.sampling.ivp.max_steps)));
        try {
            cfg.sampling.ivp.validate(cfg.problem.b);
        } catch (const std::invalid_argument& e) {
            fail("ivp", e.what());
        }
    }

    const json& jsearch = require(doc, "search", "");
    const json& jrect = require(jsearch, "rect", "search");
    cfg.rect.re_min = get_number(jrect, "re_min", "search.rect", 0.0, true);
    cfg.rect.re_max = get_number(jrect, "re_max", "search.rect", 0.0, true);
    cfg.rect.im_min = get_number(jrect, "im_min", "search.rect", 0.0, true);
    cfg.rect.im_max = get_number(jrect, "im_max", "search.rect", 0.0, true);
    cfg.rect.max_depth = static_cast<int>(
        get_number(jrect, "max_depth", "search.rect", cfg.rect.max_depth));
    cfg.rect.boundary_samples_per_side = static_cast<int>(
        get_number(jrect, "boundary_samples_per_side", "search.rect",
                   cfg.rect.boundary_samples_per_side));
    try {
        cfg.rect.validate();
    } catch (const std::invalid_argument& e) {
        fail("search.rect", e.what());
    }
    if (jsearch.contains("full_plane")) {
        if (!jsearch.at("full_plane").is_boolean())
            fail("search.full_plane", "expected a boolean");
        cfg.full_plane = jsearch.at("full_plane").get<bool>();
    }

    if (doc.contains("output")) {
        const json& jo = doc.at("output");
        cfg.format = jo.value("format", cfg.format);
        if (cfg.format != "text" && cfg.format != "csv" && cfg.format != "json")
            fail("output.format", "expected one of text, csv, json");
        cfg.output_path = jo.value("path", cfg.output_path);
        if (jo.contains("include_bounds"))
            cfg.include_bounds = jo.at("include_bounds").get<bool>();
        if (jo.contains("compare_exact"))
            cfg.compare_exact = jo.at("compare_exact").get<bool>();
    }
    if (cfg.compare_exact && !cfg.problem.exact_eigenvalue && !cfg.problem.exact_char)
        fail("output.compare_exact",
             "problem '" + cfg.problem.name + "' has no exact oracle");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

} // namespace slspec
