#include "r2ch/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace r2ch {

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
    if (dir.empty() || dir == ".") return file;
    if (dir.back() == '/') return dir + file;
    return dir + "/" + file;
}

ConservedRow make_row(long n, const State& s, const Parameters& p, const StepReport& rep) {
    ConservedRow row;
    const ConservedRecord rec = conserved_record(n, s, p);
    row.n = rec.n;
    row.t = rec.t;
    row.I1 = rec.I1;
    row.I2 = rec.I2;
    row.E = rec.E;
    row.H = rec.H;
    row.iters = rep.iterations;
    row.res_m = rep.residual_m;
    row.res_rho = rep.residual_rho;
    row.visc_nodes = rep.viscosity_active_nodes;
    return row;
}

/// Levels at which snapshots were requested, keyed by nearest step index.
std::set<long> snapshot_levels(const RunConfig& cfg) {
    std::set<long> levels;
    for (double t : cfg.outputs.snapshot_times) {
        const long n = cfg.N == 0 ? 0 : std::lround(t / cfg.solver.tau);
        levels.insert(std::clamp(n, 0L, cfg.N));
    }
    return levels;
}

std::string fmt_err(double e) {
    std::ostringstream ss;
    ss << std::scientific << std::setprecision(4) << e;
    return ss.str();
}

std::string fmt_ord(const std::optional<double>& o) {
    if (!o) return "*";
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(4) << *o;
    return ss.str();
}

}  // namespace

RunResult cmd_run(const RunConfig& cfg, bool write_files) {
    const PeriodicGrid grid(cfg.scenario.xmin, cfg.scenario.xmax, cfg.M);
    const State initial = build_initial_state(cfg.scenario, grid);
    const Parameters& p = cfg.scenario.params;

    RunResult result;
    if (write_files) ensure_directory(cfg.outputs.output_dir);

    const std::set<long> snap_levels = snapshot_levels(cfg);
    long level = 0;
    auto observer = [&](const State& s, const StepReport& rep) {
        if (level == 0 || level == cfg.N || level % cfg.outputs.conserved_every == 0)
            result.conserved.push_back(make_row(level, s, p, rep));
        if (write_files && snap_levels.count(level)) {
            const std::string path = join_path(cfg.outputs.output_dir,
                                               snapshot_filename(s.t, cfg.outputs.format));
            write_snapshot(path, s, cfg.outputs.format);
            result.files_written.push_back(path);
        }
        ++level;
    };

    if (cfg.N == 0) {
        observer(initial, StepReport{});
        result.final_state = initial;
    } else {
        Trajectory traj = run(initial, p, cfg.solver, cfg.t_end, {observer}, false);
        result.final_state = traj.states.back();
    }

    if (write_files) {
        const std::string path =
            join_path(cfg.outputs.output_dir, cfg.outputs.format == OutputFormat::Csv
                                                  ? "conserved.csv"
                                                  : "conserved.json");
        write_conserved_series(path, result.conserved, cfg.outputs.format);
        result.files_written.push_back(path);
    }
    return result;
}

ConvergenceStudy cmd_convergence(const RunConfig& cfg, ConvergenceAxis axis, int levels,
                                 bool write_files) {
    if (levels < 2)
        throw ConfigError("convergence: levels must be at least 2");
    if (cfg.N < 1) throw ConfigError("convergence: the base config must take steps");

    ConvergenceStudy study;
    study.axis = axis;

    auto run_rung = [&](int rung) {
        RunConfig rc = cfg;
        if (axis == ConvergenceAxis::Time) {
            rc.N = cfg.N << rung;
        } else {
            rc.M = cfg.M << rung;
        }
        rc.solver.tau = rc.t_end / static_cast<double>(rc.N);
        const PeriodicGrid grid(rc.scenario.xmin, rc.scenario.xmax, rc.M);
        const State initial = build_initial_state(rc.scenario, grid);
        try {
            return run(initial, rc.scenario.params, rc.solver, rc.t_end, {}, true);
        } catch (const NonConvergence& e) {
            throw NonConvergence("convergence rung " + std::to_string(rung) + " (M=" +
                                     std::to_string(rc.M) + ", N=" + std::to_string(rc.N) +
                                     ") failed: " + e.what(),
                                 e.t, e.iterations);
        }
    };

    Trajectory coarse = run_rung(0);
    for (int r = 0; r < levels; ++r) {
        Trajectory fine = run_rung(r + 1);
        const SupDiff d = axis == ConvergenceAxis::Time ? sup_diff_time(coarse, fine)
                                                        : sup_diff_space(coarse, fine);
        ConvergenceRow ru, rrho;
        ru.resolution = rrho.resolution =
            axis == ConvergenceAxis::Time ? static_cast<int>(cfg.N << r) : (cfg.M << r);
        ru.error = d.u;
        rrho.error = d.rho;
        if (r > 0) {
            const double pu = study.u_rows.back().error;
            const double pr = study.rho_rows.back().error;
            if (pu > 0.0 && d.u > 0.0) ru.order = observed_order(pu, d.u);
            if (pr > 0.0 && d.rho > 0.0) rrho.order = observed_order(pr, d.rho);
        }
        study.u_rows.push_back(ru);
        study.rho_rows.push_back(rrho);
        coarse = std::move(fine);
    }

    if (write_files) {
        ensure_directory(cfg.outputs.output_dir);
        std::ostringstream csv;
        csv << (axis == ConvergenceAxis::Time ? "N" : "M")
            << ",error_u,order_u,error_rho,order_rho\n";
        for (std::size_t i = 0; i < study.u_rows.size(); ++i) {
            const ConvergenceRow& u = study.u_rows[i];
            const ConvergenceRow& r = study.rho_rows[i];
            csv << u.resolution << ',' << format_double(u.error) << ','
                << (u.order ? format_double(*u.order) : "") << ',' << format_double(r.error)
                << ',' << (r.order ? format_double(*r.order) : "") << '\n';
        }
        const std::string path = join_path(
            cfg.outputs.output_dir,
            axis == ConvergenceAxis::Time ? "convergence_time.csv" : "convergence_space.csv");
        write_text_file(path, csv.str());
        study.files_written.push_back(path);
    }
    return study;
}

std::string convergence_table_text(const ConvergenceStudy& study) {
    std::ostringstream out;
    const char* res = study.axis == ConvergenceAxis::Time ? "N" : "M";
    const char* err = study.axis == ConvergenceAxis::Time ? "||G||_inf" : "||F||_inf";
    out << std::setw(8) << res << "  " << std::setw(12) << (std::string(err) + " (u)")
        << "  " << std::setw(8) << "Ord(u)" << "  " << std::setw(12)
        << (std::string(err) + " (rho)") << "  " << std::setw(8) << "Ord(rho)" << '\n';
    for (std::size_t i = 0; i < study.u_rows.size(); ++i) {
        const ConvergenceRow& u = study.u_rows[i];
        const ConvergenceRow& r = study.rho_rows[i];
        out << std::setw(8) << u.resolution << "  " << std::setw(12) << fmt_err(u.error)
            << "  " << std::setw(8) << fmt_ord(u.order) << "  " << std::setw(12)
            << fmt_err(r.error) << "  " << std::setw(8) << fmt_ord(r.order) << '\n';
    }
    return out.str();
}

ConservationAudit cmd_conservation(const RunConfig& cfg, bool write_files) {
    const PeriodicGrid grid(cfg.scenario.xmin, cfg.scenario.xmax, cfg.M);
    const State initial = build_initial_state(cfg.scenario, grid);
    const Parameters& p = cfg.scenario.params;

    ConservationAudit audit;
    long level = 0;
    ConservedRecord base;
    auto observer = [&](const State& s, const StepReport& rep) {
        if (level == 0 || level == cfg.N || level % cfg.outputs.conserved_every == 0)
            audit.rows.push_back(make_row(level, s, p, rep));
        const ConservedRecord rec = conserved_record(level, s, p, SumMode::Compensated);
        if (level == 0) base = rec;
        audit.drift_E_rel = std::max(audit.drift_E_rel,
                                     std::abs(rec.E - base.E) / std::max(1.0, std::abs(base.E)));
        audit.drift_I1_rel = std::max(
            audit.drift_I1_rel, std::abs(rec.I1 - base.I1) / std::max(1.0, std::abs(base.I1)));
        audit.drift_I2_abs = std::max(audit.drift_I2_abs, std::abs(rec.I2 - base.I2));
        audit.drift_H_abs = std::max(audit.drift_H_abs, std::abs(rec.H - base.H));
        audit.max_abs_E = std::max(audit.max_abs_E, std::abs(rec.E));
        ++level;
    };

    if (cfg.N == 0)
        observer(initial, StepReport{});
    else
        run(initial, p, cfg.solver, cfg.t_end, {observer}, false);

    if (write_files) {
        ensure_directory(cfg.outputs.output_dir);
        const std::string path =
            join_path(cfg.outputs.output_dir, cfg.outputs.format == OutputFormat::Csv
                                                  ? "conserved.csv"
                                                  : "conserved.json");
        write_conserved_series(path, audit.rows, cfg.outputs.format);
        audit.files_written.push_back(path);
    }
    return audit;
}

std::string conservation_table_text(const ConservationAudit& audit,
                                    const std::vector<double>& highlight_times) {
    std::ostringstream out;
    out << std::setw(10) << "t" << "  " << std::setw(22) << "E" << "  " << std::setw(22)
        << "I1" << "  " << std::setw(22) << "I2" << '\n';
    auto print_row = [&](const ConservedRow& r) {
        out << std::setw(10) << r.t << "  " << std::setw(22) << format_double(r.E) << "  "
            << std::setw(22) << format_double(r.I1) << "  " << std::setw(22)
            << format_double(r.I2) << '\n';
    };
    if (highlight_times.empty()) {
        // About six evenly spaced rows, first and last always included.
        const std::size_t n = audit.rows.size();
        const std::size_t stride = std::max<std::size_t>(1, n / 5);
        for (std::size_t i = 0; i < n; i += stride) print_row(audit.rows[i]);
        if ((n - 1) % stride != 0) print_row(audit.rows.back());
    } else {
        for (double t : highlight_times) {
            const ConservedRow* best = nullptr;
            for (const ConservedRow& r : audit.rows)
                if (!best || std::abs(r.t - t) < std::abs(best->t - t)) best = &r;
            if (best) print_row(*best);
        }
    }
    out << "max drift:  |E-E0|/max(1,|E0|) = " << fmt_err(audit.drift_E_rel)
        << "   |I1-I1_0|/max(1,|I1_0|) = " << fmt_err(audit.drift_I1_rel)
        << "   |I2-I2_0| = " << fmt_err(audit.drift_I2_abs)
        << "   |H-H0| = " << fmt_err(audit.drift_H_abs) << '\n';
    return out.str();
}

std::string presets_text() {
    std::ostringstream out;
    std::size_t width = 0;
    for (const Preset& p : preset_catalog()) width = std::max(width, p.name.size());
    for (const Preset& p : preset_catalog()) {
        out << std::left << std::setw(static_cast<int>(width) + 2) << p.name << std::right
            << "M=" << std::setw(6) << p.M << "  N=" << std::setw(7) << p.N
            << "  T=" << std::setw(5) << p.t_end << "  " << p.note << '\n';
    }
    return out.str();
}

}  // namespace r2ch
