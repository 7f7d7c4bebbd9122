#ifndef SLSPEC_CONFIG_HPP
#define SLSPEC_CONFIG_HPP

#include <string>

#include "slspec/problems.hpp"
#include "slspec/rootfind.hpp"
#include "slspec/sampling.hpp"

namespace slspec {

class ConfigError : public Error {
public:
    using Error::Error;
};

/// One JSON document drives a run: the problem (builtin name or inline
/// definition), sampling parameters, search rectangle and output options.
/// See docs/config-schema.md for the schema and per-builtin examples.
struct RunConfig {
    Problem problem;
    SamplingConfig sampling;
    SearchRect rect;
    bool full_plane = false;
    std::string format = "text"; // text | csv | json
    std::string output_path;     // empty = stdout
    bool include_bounds = false;
    bool compare_exact = false;
};

/// Parse a config document; errors carry the offending field path (and,
/// for embedded expressions, the byte offset inside the expression).
RunConfig parse_run_config(const std::string& json_text);

/// Read and parse a config file.
RunConfig load_run_config(const std::string& path);

} // namespace slspec

#endif
