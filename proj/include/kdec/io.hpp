#pragma once

#include "kdec/cases.hpp"
#include "kdec/fourier.hpp"
#include "kdec/grid.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef KDEC_GIT_DESCRIBE
#define KDEC_GIT_DESCRIBE "unknown"
#endif

namespace kdec {

/// Configuration problems (bad keys, values, files); the CLI maps them to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string git_describe() { return KDEC_GIT_DESCRIBE; }

/// Shortest text that parses back to exactly v (17 significant digits).
inline std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path)
{
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    return os;
}

inline std::string trim(std::string s)
{
    auto sp = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), sp));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), sp).base(), s.end());
    return s;
}

} // namespace detail

/// Rows `x,y,c1..cn`, j outer, i inner.
inline void write_field_csv(std::ostream& os, const Field& f, const std::vector<std::string>& names)
{
    if (static_cast<int>(names.size()) != f.ncomp()) {
        throw std::invalid_argument("write_field_csv: one name per component required");
    }
    os << "x,y";
    for (const auto& n : names) {
        os << ',' << n;
    }
    os << '\n';
    const Grid2D& g = f.grid();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            os << fmt17(g.x(i)) << ',' << fmt17(g.y(j));
            for (int c = 0; c < f.ncomp(); ++c) {
                os << ',' << fmt17(f(i, j, c));
            }
            os << '\n';
        }
    }
}

inline void write_field_csv(const std::string& path, const Field& f, const std::vector<std::string>& names)
{
    auto os = detail::open_out(path);
    write_field_csv(os, f, names);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Numeric CSV with one header line; empty cells read as NaN.
inline CsvTable read_csv(std::istream& is)
{
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) {
        throw std::runtime_error("read_csv: empty input");
    }
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            t.header.push_back(detail::trim(cell));
        }
    }
    while (std::getline(is, line)) {
        if (detail::trim(line).empty()) {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cell = detail::trim(cell);
            row.push_back(cell.empty() ? std::nan("") : std::stod(cell));
        }
        if (line.back() == ',') {
            row.push_back(std::nan(""));
        }
        if (row.size() != t.header.size()) {
            throw std::runtime_error("read_csv: row width does not match header");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline CsvTable read_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return read_csv(is);
}

inline void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows)
{
    os << "nx,h,L1,slope_L1,L2,slope_L2,Linf,slope_Linf\n";
    for (const auto& r : rows) {
        auto s = [&](double Norms::*m) { return r.slope ? fmt17((*r.slope).*m) : std::string(); };
        os << r.nx << ',' << fmt17(r.h) << ',' << fmt17(r.err.l1) << ',' << s(&Norms::l1) << ','
           << fmt17(r.err.l2) << ',' << s(&Norms::l2) << ',' << fmt17(r.err.linf) << ',' << s(&Norms::linf)
           << '\n';
    }
}

inline void write_stability_csv(std::ostream& os, const std::vector<RasterPoint>& pts)
{
    os << "re,im,modulus\n";
    for (const auto& p : pts) {
        os << fmt17(p.re) << ',' << fmt17(p.im) << ',' << fmt17(p.modulus) << '\n';
    }
}

/// One row per flagged quad and step: `step,t,i,j`.
inline void write_flags_csv(std::ostream& os, const CaseResult& r, const Grid2D& g)
{
    os << "step,t,i,j\n";
    for (const auto& s : r.steps) {
        for (auto q : s.flagged_quads) {
            const auto nx = static_cast<std::size_t>(g.nx());
            os << s.step << ',' << fmt17(s.t) << ',' << q % nx << ',' << q / nx << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// configuration

inline Stabilizer parse_stabilizer(const std::string& s)
{
    if (s == "none") return Stabilizer::none;
    if (s == "limiter") return Stabilizer::limiter;
    if (s == "mood") return Stabilizer::mood;
    throw ConfigError("stabilizer must be none, limiter or mood, got '" + s + "'");
}

namespace detail {

inline double to_double(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size()) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    }
    return d;
}

inline int to_int(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    long n = 0;
    try {
        n = std::stol(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size()) {
        throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
    }
    return static_cast<int>(n);
}

inline std::string normalize_key(std::string k)
{
    std::replace(k.begin(), k.end(), '-', '_');
    return k;
}

} // namespace detail

/// Settings outside RunConfig that the CLI also reads from config files.
struct CliExtras {
    std::string out{"out"};
    int levels{3};
};

/// Applies one `key = value` setting. Keys accept '-' or '_'.
inline void apply_setting(RunConfig& cfg, CliExtras& extra, const std::string& raw_key, const std::string& value)
{
    using detail::to_double;
    using detail::to_int;
    const std::string key = detail::normalize_key(raw_key);
    try {
        if (key == "case") cfg.case_id = parse_case(value);
        else if (key == "nx") cfg.nx = to_int(key, value);
        else if (key == "ny") cfg.ny = to_int(key, value);
        else if (key == "T") cfg.T = to_double(key, value);
        else if (key == "cfl") cfg.cfl = to_double(key, value);
        else if (key == "eps") cfg.scheme.eps = to_double(key, value);
        else if (key == "time_order") cfg.scheme.time_order = to_int(key, value);
        else if (key == "space_order") cfg.scheme.space_order = to_int(key, value);
        else if (key == "iterations") cfg.scheme.iterations = to_int(key, value);
        else if (key == "stabilizer") cfg.stabilizer = parse_stabilizer(value);
        else if (key == "family") {
            if (value == "four") cfg.family.kind = WaveFamily::Kind::four_wave;
            else if (value == "general") cfg.family.kind = WaveFamily::Kind::general;
            else throw ConfigError("family must be four or general, got '" + value + "'");
        }
        else if (key == "J") cfg.family.rings = to_int(key, value);
        else if (key == "Nprime") cfg.family.directions = to_int(key, value);
        else if (key == "lambda_safety") cfg.lambda_safety = to_double(key, value);
        else if (key == "gamma") cfg.gamma = to_double(key, value);
        else if (key == "drift") {
            if (value == "formula") cfg.drift = VortexDrift::formula;
            else if (value == "freestream") cfg.drift = VortexDrift::freestream;
            else throw ConfigError("drift must be formula or freestream, got '" + value + "'");
        }
        else if (key == "limiter_M") cfg.scheme.limiter.mbound = to_double(key, value);
        else if (key == "limiter_alpha") cfg.scheme.limiter.alpha = to_double(key, value);
        else if (key == "mood_passes") cfg.scheme.mood_passes = to_int(key, value);
        else if (key == "out") extra.out = value;
        else if (key == "levels") extra.levels = to_int(key, value);
        else throw ConfigError("unknown configuration key '" + raw_key + "'");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

/// Parses `key = value` lines; '#' starts a comment, [section] headers are ignored.
inline std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& is)
{
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) {
            line.erase(h);
        }
        line = detail::trim(line);
        if (line.empty() || line.front() == '[') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string v = detail::trim(line.substr(eq + 1));
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
            v = v.substr(1, v.size() - 2);
        }
        kv.emplace_back(detail::trim(line.substr(0, eq)), v);
    }
    return kv;
}

/// Echo of every numerics-relevant knob, with the same keys as the config file.
inline nlohmann::json config_to_json(const RunConfig& cfg)
{
    const SchemeConfig s = cfg.resolved_scheme();
    nlohmann::json j;
    j["case"] = to_string(cfg.case_id);
    j["nx"] = cfg.resolved_nx();
    j["ny"] = cfg.resolved_ny();
    j["T"] = cfg.resolved_T();
    j["cfl"] = cfg.cfl;
    j["eps"] = s.eps;
    j["time_order"] = s.time_order;
    j["space_order"] = s.space_order;
    j["iterations"] = s.corrections();
    j["stabilizer"] = to_string(s.stabilizer);
    j["family"] = cfg.family.kind == WaveFamily::Kind::four_wave ? "four" : "general";
    j["J"] = cfg.family.rings;
    j["Nprime"] = cfg.family.directions;
    j["lambda_safety"] = cfg.lambda_safety;
    j["gamma"] = cfg.gamma;
    j["drift"] = cfg.drift == VortexDrift::formula ? "formula" : "freestream";
    j["limiter_M"] = s.limiter.mbound;
    j["limiter_alpha"] = s.limiter.alpha;
    j["mood_passes"] = s.mood_passes;
    return j;
}

/// Reads a key = value file, or the "config" object of a metadata JSON file.
inline std::vector<std::pair<std::string, std::string>> load_config_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(is);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("bad JSON config: ") + e.what());
        }
        const auto& c = j.contains("config") ? j["config"] : j;
        std::vector<std::pair<std::string, std::string>> kv;
        for (auto it = c.begin(); it != c.end(); ++it) {
            if (it.value().is_string()) {
                kv.emplace_back(it.key(), it.value().get<std::string>());
            } else if (it.value().is_number_integer()) {
                kv.emplace_back(it.key(), std::to_string(it.value().get<long>()));
            } else if (it.value().is_number()) {
                kv.emplace_back(it.key(), fmt17(it.value().get<double>()));
            } else {
                throw ConfigError("config key '" + it.key() + "' must be a string or number");
            }
        }
        return kv;
    }
    return parse_config_text(is);
}

inline nlohmann::json norms_json(const Norms& n) { return {{"l1", n.l1}, {"l2", n.l2}, {"linf", n.linf}}; }

inline nlohmann::json run_metadata(const RunConfig& cfg, const CaseResult& r, int threads)
{
    const Grid2D g = case_grid(cfg.case_id, cfg.resolved_nx(), cfg.resolved_ny());
    nlohmann::json j;
    j["config"] = config_to_json(cfg);
    j["grid"] = {{"nx", g.nx()}, {"ny", g.ny()}, {"x0", g.x0()}, {"x1", g.x1()},
                 {"y0", g.y0()}, {"y1", g.y1()}, {"dx", g.dx()}, {"dy", g.dy()}};
    j["steps"] = r.step_count;
    j["final_time"] = r.final_time;
    j["wall_time_s"] = r.wall_seconds;
    j["lambda_final"] = r.lambda_final;
    j["git_describe"] = git_describe();
    j["threads"] = threads;
    j["conservation_drift"] = r.max_conservation_drift();
    std::size_t flagged_steps = 0;
    std::size_t fallbacks = 0;
    for (const auto& s : r.steps) {
        flagged_steps += s.flagged_quads.empty() ? 0 : 1;
        fallbacks += s.fallback ? 1 : 0;
    }
    j["mood"] = {{"steps_with_flags", flagged_steps},
                 {"max_flagged_quads", r.max_flagged_quads()},
                 {"fallback_steps", fallbacks}};
    if (!r.errors.empty()) {
        nlohmann::json e;
        for (std::size_t k = 0; k < r.errors.size(); ++k) {
            e[r.names[k]] = norms_json(r.errors[k]);
        }
        j["errors"] = e;
    }
    return j;
}

} // namespace kdec
