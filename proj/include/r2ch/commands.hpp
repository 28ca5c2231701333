#pragma once

#include <string>
#include <vector>

#include "r2ch/output.hpp"

namespace r2ch {

struct RunResult {
    State final_state;
    std::vector<ConservedRow> conserved;
    std::vector<std::string> files_written;
};

/// Runs the configured experiment: writes snapshot files at the requested
/// times (columns x,u,rho,m) and the conserved-series file (row n = 0 is
/// always present, computed before any stepping).
RunResult cmd_run(const RunConfig& cfg, bool write_files = true);

enum class ConvergenceAxis { Space, Time };

struct ConvergenceStudy {
    ConvergenceAxis axis = ConvergenceAxis::Time;
    std::vector<ConvergenceRow> u_rows;
    std::vector<ConvergenceRow> rho_rows;
    std::vector<std::string> files_written;
};

/// Posterior-error refinement ladder. The config supplies the base rung;
/// each of the `levels` error rows compares a rung against its refinement
/// (levels + 1 runs in total). Time axis: M fixed, N doubled per rung.
/// Space axis: N fixed, M doubled per rung.
ConvergenceStudy cmd_convergence(const RunConfig& cfg, ConvergenceAxis axis, int levels,
                                 bool write_files = true);

/// Aligned text rendering of a convergence study, one row per rung.
std::string convergence_table_text(const ConvergenceStudy& study);

struct ConservationAudit {
    std::vector<ConservedRow> rows;  // sequential-sum values, as filed
    // Worst drifts over every accepted level, measured on the compensated
    // summation path so summation noise does not pollute the audit.
    double drift_E_rel = 0.0;
    double drift_I1_rel = 0.0;
    double drift_I2_abs = 0.0;
    double drift_H_abs = 0.0;
    double max_abs_E = 0.0;
    std::vector<std::string> files_written;
};

/// Runs the experiment while auditing the conserved quantities at every
/// accepted level; writes the conserved series like cmd_run.
ConservationAudit cmd_conservation(const RunConfig& cfg, bool write_files = true);

/// Table-style rendering of selected conserved rows plus the drift summary.
std::string conservation_table_text(const ConservationAudit& audit,
                                    const std::vector<double>& highlight_times);

/// One line per catalog entry.
std::string presets_text();

}  // namespace r2ch
