#include "r2ch/output.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace r2ch {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string snapshot_filename(double t, OutputFormat format) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "snapshot_t%g", t);
    return std::string(buf) + (format == OutputFormat::Csv ? ".csv" : ".json");
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

nlohmann::json column(const std::vector<double>& v) { return nlohmann::json(v); }

}  // namespace

void write_snapshot(const std::string& path, const State& s, OutputFormat format) {
    const int M = s.u.grid.M;
    if (format == OutputFormat::Csv) {
        std::ostringstream body;
        body << "x,u,rho,m\n";
        for (int i = 0; i < M; ++i)
            body << format_double(s.u.grid.node(i)) << ',' << format_double(s.u[i]) << ','
                 << format_double(s.rho[i]) << ',' << format_double(s.m[i]) << '\n';
        write_text_file(path, body.str());
        return;
    }
    std::vector<double> x(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) x[static_cast<std::size_t>(i)] = s.u.grid.node(i);
    nlohmann::json j;
    j["t"] = s.t;
    j["x"] = column(x);
    j["u"] = column(s.u.values);
    j["rho"] = column(s.rho.values);
    j["m"] = column(s.m.values);
    write_text_file(path, j.dump(2) + "\n");
}

void write_conserved_series(const std::string& path, const std::vector<ConservedRow>& rows,
                            OutputFormat format) {
    if (format == OutputFormat::Csv) {
        std::ostringstream body;
        body << "n,t,I1,I2,E,H,iters,res_m,res_rho,visc_nodes\n";
        for (const ConservedRow& r : rows)
            body << r.n << ',' << format_double(r.t) << ',' << format_double(r.I1) << ','
                 << format_double(r.I2) << ',' << format_double(r.E) << ','
                 << format_double(r.H) << ',' << r.iters << ',' << format_double(r.res_m)
                 << ',' << format_double(r.res_rho) << ',' << r.visc_nodes << '\n';
        write_text_file(path, body.str());
        return;
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const ConservedRow& r : rows) {
        nlohmann::json j;
        j["n"] = r.n;
        j["t"] = r.t;
        j["I1"] = r.I1;
        j["I2"] = r.I2;
        j["E"] = r.E;
        j["H"] = r.H;
        j["iters"] = r.iters;
        j["res_m"] = r.res_m;
        j["res_rho"] = r.res_rho;
        j["visc_nodes"] = r.visc_nodes;
        arr.push_back(j);
    }
    write_text_file(path, arr.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out = open_out(path);
    out << content;
    if (!out) throw IoError("write to '" + path + "' failed");
}

void ensure_directory(const std::string& dir) {
    if (dir.empty() || dir == ".") return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

}  // namespace r2ch
