#pragma once

#include <string>
#include <vector>

#include "r2ch/config.hpp"
#include "r2ch/diagnostics.hpp"

namespace r2ch {

/// One line of the conserved-series output.
struct ConservedRow {
    long n = 0;
    double t = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;
    double E = 0.0;
    double H = 0.0;
    int iters = 0;
    double res_m = 0.0;
    double res_rho = 0.0;
    int visc_nodes = 0;
};

/// Decimal with 17 significant digits; round-trips to the same double and is
/// locale-independent, so output files are byte-stable.
std::string format_double(double v);

std::string snapshot_filename(double t, OutputFormat format);

void write_snapshot(const std::string& path, const State& s, OutputFormat format);

void write_conserved_series(const std::string& path, const std::vector<ConservedRow>& rows,
                            OutputFormat format);

void write_text_file(const std::string& path, const std::string& content);

/// Creates the directory (and parents) if needed; IoError on failure.
void ensure_directory(const std::string& dir);

}  // namespace r2ch
