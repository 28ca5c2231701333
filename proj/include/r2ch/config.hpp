#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "r2ch/scenarios.hpp"

namespace r2ch {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

struct OutputConfig {
    std::vector<double> snapshot_times;
    long conserved_every = 1;
    std::string output_dir = ".";
    OutputFormat format = OutputFormat::Csv;

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

/// Everything needed to reproduce one experiment.
struct RunConfig {
    std::string preset_name;  // empty when the scenario is spelled out inline
    ScenarioSpec scenario;
    int M = 0;
    long N = 0;
    double t_end = 0.0;
    SolverConfig solver;
    OutputConfig outputs;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses a JSON key-value document into a validated RunConfig. A "preset"
/// key seeds every field from the named catalog entry; explicit keys then
/// override. Defaults: tol 1e-12, max_iter 200, viscosity off, epsilon 1e-5.
/// Throws ConfigError naming the offending key on any violation.
RunConfig parse_config(const std::string& text);

/// Emits the full configuration as JSON; parse_config round-trips it.
std::string serialize_config(const RunConfig& cfg);

/// Reads and parses a config file. Missing/unreadable file -> IoError.
RunConfig load_config_file(const std::string& path);

const char* to_string(ScenarioKind kind);
const char* to_string(OutputFormat format);

}  // namespace r2ch
