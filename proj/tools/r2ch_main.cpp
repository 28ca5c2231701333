#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "r2ch/commands.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

struct CommonFlags {
    std::string output_dir;
    std::string format;
    double tol = -1.0;
    std::string viscosity;
    double epsilon = -1.0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--output-dir", f.output_dir, "Directory for emitted files");
    cmd->add_option("--format", f.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--tol", f.tol, "Fixed-point stopping tolerance");
    cmd->add_option("--viscosity", f.viscosity, "Threshold viscosity: on or off")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--epsilon", f.epsilon, "Viscosity threshold");
}

r2ch::RunConfig load_with_flags(const std::string& path, const CommonFlags& f) {
    r2ch::RunConfig cfg = r2ch::load_config_file(path);
    if (!f.output_dir.empty()) cfg.outputs.output_dir = f.output_dir;
    if (!f.format.empty())
        cfg.outputs.format =
            f.format == "csv" ? r2ch::OutputFormat::Csv : r2ch::OutputFormat::Json;
    if (f.tol > 0.0) cfg.solver.tol = f.tol;
    if (!f.viscosity.empty()) cfg.solver.viscosity_enabled = f.viscosity == "on";
    if (f.epsilon >= 0.0) cfg.solver.epsilon = f.epsilon;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conservative finite-difference solver for the rotation-two-component "
                 "Camassa-Holm system"};
    app.require_subcommand(1);

    std::string config_path;
    CommonFlags flags;

    CLI::App* cmd_run = app.add_subcommand("run", "Run one experiment and emit snapshots "
                                                  "plus the conserved series");
    cmd_run->add_option("config", config_path, "JSON config file")->required();
    add_common_flags(cmd_run, flags);

    std::string axis = "time";
    int levels = 5;
    CLI::App* cmd_conv =
        app.add_subcommand("convergence", "Posterior-error refinement ladder");
    cmd_conv->add_option("config", config_path, "JSON config file")->required();
    cmd_conv->add_option("--axis", axis, "Refinement axis: space or time")
        ->check(CLI::IsMember({"space", "time"}));
    cmd_conv->add_option("--levels", levels, "Number of error rows (runs one extra rung)");
    add_common_flags(cmd_conv, flags);

    CLI::App* cmd_cons =
        app.add_subcommand("conservation", "Run and audit the conserved quantities");
    cmd_cons->add_option("config", config_path, "JSON config file")->required();
    add_common_flags(cmd_cons, flags);

    CLI::App* cmd_presets = app.add_subcommand("presets", "List the preset catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (cmd_presets->parsed()) {
            std::cout << r2ch::presets_text();
            return kExitOk;
        }
        if (cmd_run->parsed()) {
            const r2ch::RunConfig cfg = load_with_flags(config_path, flags);
            const r2ch::RunResult result = r2ch::cmd_run(cfg);
            std::cout << "completed " << cfg.N << " steps to t = "
                      << r2ch::format_double(result.final_state.t) << "\n";
            for (const std::string& f : result.files_written) std::cout << "wrote " << f << "\n";
            return kExitOk;
        }
        if (cmd_conv->parsed()) {
            const r2ch::RunConfig cfg = load_with_flags(config_path, flags);
            const auto study = r2ch::cmd_convergence(
                cfg,
                axis == "time" ? r2ch::ConvergenceAxis::Time : r2ch::ConvergenceAxis::Space,
                levels);
            std::cout << r2ch::convergence_table_text(study);
            for (const std::string& f : study.files_written) std::cout << "wrote " << f << "\n";
            return kExitOk;
        }
        if (cmd_cons->parsed()) {
            const r2ch::RunConfig cfg = load_with_flags(config_path, flags);
            const auto audit = r2ch::cmd_conservation(cfg);
            std::cout << r2ch::conservation_table_text(audit, cfg.outputs.snapshot_times);
            for (const std::string& f : audit.files_written) std::cout << "wrote " << f << "\n";
            return kExitOk;
        }
    } catch (const r2ch::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const r2ch::NonConvergence& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const r2ch::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
