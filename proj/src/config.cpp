#include "r2ch/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace r2ch {

using nlohmann::json;

const char* to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::DamBreak: return "dam_break";
        case ScenarioKind::ThreePeakonCH: return "three_peakon_ch";
        case ScenarioKind::SinglePeakon: return "single_peakon";
        case ScenarioKind::PiecewiseSinh: return "piecewise_sinh";
        case ScenarioKind::TwoPeakon: return "two_peakon";
    }
    return "?";
}

const char* to_string(OutputFormat format) {
    return format == OutputFormat::Csv ? "csv" : "json";
}

namespace {

ScenarioKind kind_from_string(const std::string& s) {
    if (s == "dam_break") return ScenarioKind::DamBreak;
    if (s == "three_peakon_ch") return ScenarioKind::ThreePeakonCH;
    if (s == "single_peakon") return ScenarioKind::SinglePeakon;
    if (s == "piecewise_sinh") return ScenarioKind::PiecewiseSinh;
    if (s == "two_peakon") return ScenarioKind::TwoPeakon;
    throw ConfigError("scenario.kind: unknown kind '" + s + "'");
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return v.get<double>();
}

void parse_params(const json& obj, Parameters& p) {
    check_keys(obj, {"A", "mu", "sigma", "Omega"}, "scenario.params");
    if (obj.contains("A")) p.A = get_number(obj, "A", "scenario.params");
    if (obj.contains("mu")) p.mu = get_number(obj, "mu", "scenario.params");
    if (obj.contains("sigma")) p.sigma = get_number(obj, "sigma", "scenario.params");
    if (obj.contains("Omega")) p.Omega = get_number(obj, "Omega", "scenario.params");
}

void parse_scenario(const json& obj, ScenarioSpec& s) {
    check_keys(obj,
               {"kind", "domain", "rho_background", "a", "x0", "p1", "p2", "x1", "x2",
                "peakon_c", "peakon_x", "params"},
               "scenario");
    if (obj.contains("kind")) s.kind = kind_from_string(obj.at("kind").get<std::string>());
    if (obj.contains("domain")) {
        const json& d = obj.at("domain");
        if (!d.is_array() || d.size() != 2)
            throw ConfigError("scenario.domain: expected [xmin, xmax]");
        s.xmin = d[0].get<double>();
        s.xmax = d[1].get<double>();
    }
    if (obj.contains("rho_background"))
        s.rho_background = get_number(obj, "rho_background", "scenario");
    if (obj.contains("a")) s.a = get_number(obj, "a", "scenario");
    if (obj.contains("x0")) s.x0 = get_number(obj, "x0", "scenario");
    if (obj.contains("p1")) s.p1 = get_number(obj, "p1", "scenario");
    if (obj.contains("p2")) s.p2 = get_number(obj, "p2", "scenario");
    if (obj.contains("x1")) s.x1 = get_number(obj, "x1", "scenario");
    if (obj.contains("x2")) s.x2 = get_number(obj, "x2", "scenario");
    for (const char* key : {"peakon_c", "peakon_x"}) {
        if (!obj.contains(key)) continue;
        const json& arr = obj.at(key);
        if (!arr.is_array() || arr.size() != 3)
            throw ConfigError(std::string("scenario.") + key + ": expected three values");
        auto& target = std::string(key) == "peakon_c" ? s.peakon_c : s.peakon_x;
        for (int i = 0; i < 3; ++i) target[static_cast<std::size_t>(i)] = arr[static_cast<std::size_t>(i)].get<double>();
    }
    if (obj.contains("params")) parse_params(obj.at("params"), s.params);
}

/// Returns true when solver.tau was given explicitly.
bool parse_solver(const json& obj, SolverConfig& s) {
    check_keys(obj,
               {"tau", "tol", "max_iter", "viscosity", "epsilon", "residual_check",
                "lopsided_rho_flux_test_hook"},
               "solver");
    bool tau_given = false;
    if (obj.contains("tau")) {
        s.tau = get_number(obj, "tau", "solver");
        tau_given = true;
    }
    if (obj.contains("tol")) s.tol = get_number(obj, "tol", "solver");
    if (obj.contains("max_iter")) s.max_iter = obj.at("max_iter").get<int>();
    if (obj.contains("viscosity")) s.viscosity_enabled = obj.at("viscosity").get<bool>();
    if (obj.contains("epsilon")) s.epsilon = get_number(obj, "epsilon", "solver");
    if (obj.contains("residual_check"))
        s.residual_check = obj.at("residual_check").get<bool>();
    if (obj.contains("lopsided_rho_flux_test_hook"))
        s.lopsided_rho_flux = obj.at("lopsided_rho_flux_test_hook").get<bool>();
    return tau_given;
}

void parse_outputs(const json& obj, OutputConfig& o) {
    check_keys(obj, {"snapshot_times", "conserved_every", "output_dir", "format"},
               "outputs");
    if (obj.contains("snapshot_times")) {
        o.snapshot_times.clear();
        for (const json& v : obj.at("snapshot_times")) o.snapshot_times.push_back(v.get<double>());
    }
    if (obj.contains("conserved_every")) o.conserved_every = obj.at("conserved_every").get<long>();
    if (obj.contains("output_dir")) o.output_dir = obj.at("output_dir").get<std::string>();
    if (obj.contains("format")) {
        const std::string f = obj.at("format").get<std::string>();
        if (f == "csv")
            o.format = OutputFormat::Csv;
        else if (f == "json")
            o.format = OutputFormat::Json;
        else
            throw ConfigError("outputs.format: expected 'csv' or 'json', got '" + f + "'");
    }
}

void validate(RunConfig& cfg) {
    if (cfg.M < 5) throw ConfigError("M: must be at least 5");
    if (cfg.N < 0) throw ConfigError("N: must be non-negative");
    if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end: must be non-negative");
    if (!(cfg.scenario.xmax > cfg.scenario.xmin))
        throw ConfigError("scenario.domain: xmax must exceed xmin");
    try {
        cfg.scenario.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("scenario.params: ") + e.what());
    }

    if (cfg.N == 0 && cfg.t_end > 0.0)
        throw ConfigError("N: zero steps cannot reach t_end > 0; give N or solver.tau");
    if (cfg.N > 0) {
        try {
            cfg.solver.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("solver: ") + e.what());
        }
        const double reached = static_cast<double>(cfg.N) * cfg.solver.tau;
        if (std::abs(reached - cfg.t_end) > 1e-12 * std::max(1.0, std::abs(cfg.t_end)))
            throw ConfigError("solver.tau: N * tau must equal t_end (relative 1e-12)");
    }

    for (double t : cfg.outputs.snapshot_times)
        if (t < 0.0 || t > cfg.t_end)
            throw ConfigError("outputs.snapshot_times: time " + std::to_string(t) +
                              " outside [0, t_end]");
    if (cfg.outputs.conserved_every < 1)
        throw ConfigError("outputs.conserved_every: must be at least 1");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    check_keys(root, {"preset", "scenario", "M", "N", "t_end", "solver", "outputs"},
               "config");

    RunConfig cfg;
    const bool has_preset = root.contains("preset");
    const bool n_given = root.contains("N");
    bool tau_given = false;

    try {
        if (has_preset) {
            cfg.preset_name = root.at("preset").get<std::string>();
            try {
                const Preset& p = preset(cfg.preset_name);
                cfg.scenario = p.scenario;
                cfg.solver = p.solver;
                cfg.M = p.M;
                cfg.N = p.N;
                cfg.t_end = p.t_end;
            } catch (const UnknownPreset& e) {
                throw ConfigError(std::string("preset: ") + e.what());
            }
        } else {
            if (!root.contains("scenario"))
                throw ConfigError("config: either 'preset' or 'scenario' is required");
            if (!root.contains("M")) throw ConfigError("M: required without a preset");
            if (!root.contains("t_end"))
                throw ConfigError("t_end: required without a preset");
        }

        if (root.contains("scenario")) parse_scenario(root.at("scenario"), cfg.scenario);
        if (root.contains("M")) cfg.M = root.at("M").get<int>();
        if (n_given) cfg.N = root.at("N").get<long>();
        if (root.contains("t_end")) cfg.t_end = root.at("t_end").get<double>();
        if (root.contains("solver")) tau_given = parse_solver(root.at("solver"), cfg.solver);
        if (root.contains("outputs")) parse_outputs(root.at("outputs"), cfg.outputs);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    if (!has_preset && !n_given && !tau_given)
        throw ConfigError("N: either N or solver.tau is required without a preset");

    // Resolve the N / tau / t_end triangle. An explicit tau with no explicit
    // N derives N; otherwise tau follows from N and t_end. When both are
    // explicit they must agree with t_end (checked by validate below).
    if (tau_given && !n_given) {
        if (!(cfg.solver.tau > 0.0)) throw ConfigError("solver.tau: must be positive");
        cfg.N = std::lround(cfg.t_end / cfg.solver.tau);
    } else if (!tau_given && cfg.N > 0) {
        cfg.solver.tau = cfg.t_end / static_cast<double>(cfg.N);
    }

    validate(cfg);
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json root;
    if (!cfg.preset_name.empty()) root["preset"] = cfg.preset_name;
    json sc;
    sc["kind"] = to_string(cfg.scenario.kind);
    sc["domain"] = {cfg.scenario.xmin, cfg.scenario.xmax};
    sc["rho_background"] = cfg.scenario.rho_background;
    sc["a"] = cfg.scenario.a;
    sc["x0"] = cfg.scenario.x0;
    sc["p1"] = cfg.scenario.p1;
    sc["p2"] = cfg.scenario.p2;
    sc["x1"] = cfg.scenario.x1;
    sc["x2"] = cfg.scenario.x2;
    sc["peakon_c"] = cfg.scenario.peakon_c;
    sc["peakon_x"] = cfg.scenario.peakon_x;
    sc["params"] = {{"A", cfg.scenario.params.A},
                    {"mu", cfg.scenario.params.mu},
                    {"sigma", cfg.scenario.params.sigma},
                    {"Omega", cfg.scenario.params.Omega}};
    root["scenario"] = sc;
    root["M"] = cfg.M;
    root["N"] = cfg.N;
    root["t_end"] = cfg.t_end;
    root["solver"] = {{"tau", cfg.solver.tau},
                      {"tol", cfg.solver.tol},
                      {"max_iter", cfg.solver.max_iter},
                      {"viscosity", cfg.solver.viscosity_enabled},
                      {"epsilon", cfg.solver.epsilon},
                      {"residual_check", cfg.solver.residual_check},
                      {"lopsided_rho_flux_test_hook", cfg.solver.lopsided_rho_flux}};
    root["outputs"] = {{"snapshot_times", cfg.outputs.snapshot_times},
                       {"conserved_every", cfg.outputs.conserved_every},
                       {"output_dir", cfg.outputs.output_dir},
                       {"format", to_string(cfg.outputs.format)}};
    return root.dump(2);
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace r2ch
