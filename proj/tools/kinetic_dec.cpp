// kinetic_dec: run, converge, stability and cases subcommands.

#include "kdec/kdec.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace fs = std::filesystem;
using namespace kdec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

// every numerics flag, stored as text and applied through apply_setting
const std::vector<std::pair<std::string, std::string>> kRunFlags = {
    {"--case", "advection | vortex | sod | strong-shock"},
    {"--nx", "nodes in x"},
    {"--ny", "nodes in y (default: nx)"},
    {"--T", "final time"},
    {"--cfl", "CFL number on the kinetic speed"},
    {"--eps", "relaxation time"},
    {"--time-order", "1 | 2 | 4"},
    {"--space-order", "1..4"},
    {"--iterations", "corrections per step (default: time order + 1)"},
    {"--stabilizer", "none | limiter | mood"},
    {"--family", "four | general"},
    {"--J", "rings of the general family"},
    {"--Nprime", "directions per quadrant of the general family"},
    {"--lambda-safety", "factor >= 1 on the characteristic speed bound"},
    {"--gamma", "ratio of specific heats"},
    {"--drift", "vortex free stream: formula | freestream"},
    {"--limiter-M", "limiter bound M"},
    {"--limiter-alpha", "limiter window margin alpha"},
    {"--mood-passes", "recompute passes before the first-order fallback"},
    {"--out", "output directory"},
};

struct Settings {
    std::map<std::string, std::string> values;
    std::string config_path;

    void add_to(CLI::App* app, bool with_levels)
    {
        for (const auto& [flag, help] : kRunFlags) {
            app->add_option(flag, values[flag], help);
        }
        if (with_levels) {
            app->add_option("--levels", values["--levels"], "number of grids (each doubles nx)");
        }
        app->add_option("--config", config_path, "key = value file or metadata JSON; flags win");
    }

    // config file first, then explicitly given flags
    std::pair<RunConfig, CliExtras> resolve(const CLI::App* app) const
    {
        RunConfig cfg;
        CliExtras extra;
        if (!config_path.empty()) {
            for (const auto& [k, v] : load_config_file(config_path)) {
                apply_setting(cfg, extra, k, v);
            }
        }
        for (const auto& [flag, value] : values) {
            if (app->count(flag) > 0) {
                apply_setting(cfg, extra, flag.substr(2), value);
            }
        }
        try {
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        return {cfg, extra};
    }
};

void write_json(const fs::path& p, const nlohmann::json& j)
{
    std::ofstream os(p);
    if (!os) {
        throw std::runtime_error("cannot write " + p.string());
    }
    os << j.dump(2) << '\n';
}

int cmd_run(const RunConfig& cfg, const CliExtras& extra, int threads)
{
    const fs::path out(extra.out);
    fs::create_directories(out);
    const CaseResult r = run(cfg);
    const Grid2D g = case_grid(cfg.case_id, cfg.resolved_nx(), cfg.resolved_ny());
    write_field_csv((out / "field.csv").string(), r.primitive, r.names);
    if (cfg.resolved_stabilizer() == Stabilizer::mood) {
        std::ofstream os(out / "flags.csv");
        write_flags_csv(os, r, g);
    }
    write_json(out / "metadata.json", run_metadata(cfg, r, threads));
    std::cout << to_string(cfg.case_id) << ": " << r.step_count << " steps to T = " << r.final_time << " in "
              << r.wall_seconds << " s, conservation drift " << r.max_conservation_drift() << '\n';
    for (std::size_t k = 0; k < r.errors.size(); ++k) {
        std::cout << "  " << r.names[k] << " error L1 " << r.errors[k].l1 << "  L2 " << r.errors[k].l2 << "  Linf "
                  << r.errors[k].linf << '\n';
    }
    return kExitOk;
}

int cmd_converge(const RunConfig& cfg, const CliExtras& extra, int threads)
{
    const fs::path out(extra.out);
    fs::create_directories(out);
    const auto rows = convergence_study(cfg, extra.levels);
    {
        std::ofstream os(out / "convergence.csv");
        write_convergence_csv(os, rows);
    }
    nlohmann::json j;
    j["config"] = config_to_json(cfg);
    j["levels"] = extra.levels;
    j["git_describe"] = git_describe();
    j["threads"] = threads;
    write_json(out / "metadata.json", j);
    write_convergence_csv(std::cout, rows);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kinetic BGK relaxation solver with defect-correction time stepping"};
    app.require_subcommand(1);

    Settings run_s;
    auto* run_cmd = app.add_subcommand("run", "run one case and write field + metadata");
    run_s.add_to(run_cmd, false);

    Settings conv_s;
    auto* conv_cmd = app.add_subcommand("converge", "grid-refinement study against the exact solution");
    conv_s.add_to(conv_cmd, true);

    auto* stab_cmd = app.add_subcommand("stability", "von Neumann maximum CFL and amplification raster");
    int st_time = 4;
    int st_space = 4;
    int st_iter = 0;
    int st_theta = 1024;
    int st_raster = 201;
    std::string st_out = "out";
    stab_cmd->add_option("--time-order", st_time, "1 | 2 | 4");
    stab_cmd->add_option("--space-order", st_space, "1..4");
    stab_cmd->add_option("--iterations", st_iter, "corrections (default: time order + 1)");
    stab_cmd->add_option("--n-theta", st_theta, "phase samples per axis");
    stab_cmd->add_option("--raster", st_raster, "raster points per axis");
    stab_cmd->add_option("--out", st_out, "output directory");

    app.add_subcommand("cases", "list the available cases");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    int threads = 1;
    try {
        threads = configure_threads();
        if (*run_cmd) {
            const auto [cfg, extra] = run_s.resolve(run_cmd);
            return cmd_run(cfg, extra, threads);
        }
        if (*conv_cmd) {
            const auto [cfg, extra] = conv_s.resolve(conv_cmd);
            return cmd_converge(cfg, extra, threads);
        }
        if (*stab_cmd) {
            CflQuery q;
            q.time_order = st_time;
            q.space_order_x = st_space;
            q.space_order_y = st_space;
            q.iterations = st_iter > 0 ? st_iter : st_time + 1;
            q.n_theta = st_theta;
            SchemeConfig check;
            check.time_order = st_time;
            check.space_order = st_space;
            check.iterations = q.iterations;
            try {
                check.validate();
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
            q.one_d = true;
            const double c1 = max_cfl(q);
            q.one_d = false;
            const double c2 = max_cfl(q);
            std::cout << "max_cfl_1d " << c1 << "\nmax_cfl_2d " << c2 << '\n';
            const fs::path out(st_out);
            fs::create_directories(out);
            std::ofstream os(out / "stability.csv");
            write_stability_csv(os, stability_raster(st_time, q.iterations, -1.0, 5.0, -3.0, 3.0, st_raster));
            nlohmann::json j{{"time_order", st_time}, {"space_order", st_space}, {"iterations", q.iterations},
                             {"n_theta", st_theta}, {"max_cfl_1d", c1}, {"max_cfl_2d", c2},
                             {"git_describe", git_describe()}};
            write_json(out / "metadata.json", j);
            return kExitOk;
        }
        for (CaseId c : {CaseId::advection, CaseId::vortex, CaseId::sod, CaseId::strong_shock}) {
            const CaseInfo info = case_info(c);
            std::cout << to_string(c) << "  domain [" << -info.half_width << ", " << info.half_width
                      << "]^2  default n " << info.default_n << "  T " << info.default_T
                      << (info.has_exact ? "  exact solution" : "") << '\n';
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
}
