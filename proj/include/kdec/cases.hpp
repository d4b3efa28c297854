#pragma once

#include "kdec/dec.hpp"
#include "kdec/grid.hpp"
#include "kdec/kinetic.hpp"
#include "kdec/systems.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kdec {

enum class CaseId { advection, vortex, sod, strong_shock };

inline std::string to_string(CaseId c)
{
    switch (c) {
    case CaseId::advection: return "advection";
    case CaseId::vortex: return "vortex";
    case CaseId::sod: return "sod";
    case CaseId::strong_shock: return "strong-shock";
    }
    return "?";
}

inline CaseId parse_case(std::string_view s)
{
    if (s == "advection") return CaseId::advection;
    if (s == "vortex") return CaseId::vortex;
    if (s == "sod") return CaseId::sod;
    if (s == "strong-shock" || s == "strong_shock" || s == "strong") return CaseId::strong_shock;
    throw std::invalid_argument("unknown case '" + std::string(s) + "'");
}

inline bool is_scalar(CaseId c) { return c == CaseId::advection; }

struct CaseInfo {
    double half_width;
    int default_n;
    double default_T;
    bool has_exact;
};

inline CaseInfo case_info(CaseId c)
{
    switch (c) {
    case CaseId::advection: return {2.0, 80, 10.0, true};
    case CaseId::vortex: return {10.0, 50, 5.0, true};
    case CaseId::sod: return {1.0, 100, 0.16, false};
    case CaseId::strong_shock: return {1.5, 100, 0.025, false};
    }
    throw std::invalid_argument("case_info: bad case");
}

inline Grid2D case_grid(CaseId c, int nx, int ny)
{
    const double w = case_info(c).half_width;
    return Grid2D(nx, ny, -w, w, -w, w);
}

struct RunConfig {
    CaseId case_id{CaseId::advection};
    int nx{0}; // 0: case default
    int ny{0}; // 0: same as nx
    std::optional<double> T;
    double cfl{1.0};
    SchemeConfig scheme{};
    std::optional<Stabilizer> stabilizer; // unset: limiter for scalar, mood for Euler
    WaveFamily family{};
    double lambda_safety{1.05};
    double gamma{1.4};
    VortexDrift drift{VortexDrift::formula};

    [[nodiscard]] int resolved_nx() const { return nx > 0 ? nx : case_info(case_id).default_n; }
    [[nodiscard]] int resolved_ny() const { return ny > 0 ? ny : resolved_nx(); }
    [[nodiscard]] double resolved_T() const { return T ? *T : case_info(case_id).default_T; }
    [[nodiscard]] Stabilizer resolved_stabilizer() const
    {
        if (stabilizer) {
            return *stabilizer;
        }
        return is_scalar(case_id) ? Stabilizer::limiter : Stabilizer::mood;
    }
    [[nodiscard]] SchemeConfig resolved_scheme() const
    {
        SchemeConfig s = scheme;
        s.stabilizer = resolved_stabilizer();
        return s;
    }
    [[nodiscard]] VortexParams vortex() const
    {
        VortexParams p = VortexParams::with_drift(drift);
        p.gamma = gamma;
        return p;
    }

    void validate() const
    {
        if (resolved_nx() < Grid2D::kMinNodes || resolved_ny() < Grid2D::kMinNodes) {
            throw std::invalid_argument("grid needs at least 8 nodes per axis");
        }
        if (!(resolved_T() >= 0.0)) {
            throw std::invalid_argument("T must be >= 0");
        }
        if (!(cfl > 0.0)) {
            throw std::invalid_argument("cfl must be positive");
        }
        if (!(lambda_safety >= 1.0)) {
            throw std::invalid_argument("lambda safety must be >= 1");
        }
        if (family.rings < 1 || family.directions < 1) {
            throw std::invalid_argument("J and N' must be >= 1");
        }
        if (!(gamma > 1.0)) {
            throw std::invalid_argument("gamma must exceed 1");
        }
        resolved_scheme().validate();
    }
};

inline double advection_exact(double x, double y, double t)
{
    return std::sin(std::numbers::pi * (x + y - 2.0 * t));
}

namespace detail {

inline void require_domain(CaseId c, const Grid2D& g)
{
    const double w = case_info(c).half_width;
    const double tol = 1e-12 * w;
    if (std::abs(g.x0() + w) > tol || std::abs(g.x1() - w) > tol || std::abs(g.y0() + w) > tol ||
        std::abs(g.y1() - w) > tol) {
        throw std::invalid_argument("init_case: grid does not span the " + to_string(c) + " domain [" +
                                    std::to_string(-w) + ", " + std::to_string(w) + "]^2");
    }
}

} // namespace detail

/// Conserved initial data at the nodes.
inline Field init_case(CaseId c, const Grid2D& g, const RunConfig& cfg = {})
{
    detail::require_domain(c, g);
    if (c == CaseId::advection) {
        Field u(g, 1);
        for (int j = 0; j < g.ny(); ++j) {
            for (int i = 0; i < g.nx(); ++i) {
                u(i, j, 0) = advection_exact(g.x(i), g.y(j), 0.0);
            }
        }
        return u;
    }
    const Euler sys(EulerParams{cfg.gamma});
    const VortexParams vp = cfg.vortex();
    Field u(g, 4);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const double x = g.x(i);
            const double y = g.y(j);
            const double r = std::hypot(x, y);
            std::array<double, 4> prim{};
            switch (c) {
            case CaseId::vortex: prim = vortex_exact(x, y, 0.0, vp); break;
            case CaseId::sod: prim = r <= 0.5 ? std::array{1.0, 0.0, 0.0, 1.0} : std::array{0.125, 0.0, 0.0, 0.1}; break;
            case CaseId::strong_shock:
                prim = r <= 0.5 ? std::array{1.0, 0.0, 0.0, 1000.0} : std::array{1.0, 0.0, 0.0, 1.0};
                break;
            case CaseId::advection: break;
            }
            const auto s = sys.from_primitive(prim);
            for (int k = 0; k < 4; ++k) {
                u(i, j, k) = s[static_cast<std::size_t>(k)];
            }
        }
    }
    return u;
}

struct StepRecord {
    int step{0};
    double t{0.0};
    double dt{0.0};
    double lambda{0.0};
    std::size_t trial_flagged_nodes{0};
    std::vector<std::size_t> flagged_quads;
    int mood_passes{0};
    bool fallback{false};
};

struct CaseResult {
    Field conserved;
    Field primitive;
    std::vector<std::string> names;
    std::vector<Norms> errors; // per primitive component; empty without an exact solution
    std::vector<double> mass_initial;
    std::vector<double> mass_final;
    std::vector<double> mass_scale; // larger of sum dx dy |u| at t = 0 and at the final time
    std::vector<StepRecord> steps;
    int step_count{0};
    double final_time{0.0};
    double wall_seconds{0.0};
    double lambda_final{0.0};

    [[nodiscard]] double max_conservation_drift() const
    {
        double d = 0.0;
        for (std::size_t k = 0; k < mass_initial.size(); ++k) {
            const double s = mass_scale[k] > 0.0 ? mass_scale[k] : 1.0;
            d = std::max(d, std::abs(mass_final[k] - mass_initial[k]) / s);
        }
        return d;
    }
    [[nodiscard]] std::size_t max_flagged_quads() const
    {
        std::size_t m = 0;
        for (const auto& s : steps) {
            m = std::max(m, s.flagged_quads.size());
        }
        return m;
    }
};

using StepCallback = std::function<void(const StepRecord&, const Field& conserved)>;

namespace detail {

inline std::vector<double> weighted_sums(const Field& u, bool absolute)
{
    const double a = u.grid().dx() * u.grid().dy();
    std::vector<double> s(static_cast<std::size_t>(u.ncomp()), 0.0);
    for (int k = 0; k < u.ncomp(); ++k) {
        for (double v : u.plane(k)) {
            s[static_cast<std::size_t>(k)] += a * (absolute ? std::abs(v) : v);
        }
    }
    return s;
}

template <ConservationLaw Sys>
Field to_primitive_field(const Sys& sys, const Field& u)
{
    Field p(u.grid(), Sys::K);
    for (std::size_t l = 0; l < u.grid().nodes(); ++l) {
        const auto v = sys.to_primitive(state_at<Sys>(u, l));
        for (int k = 0; k < Sys::K; ++k) {
            p.plane(k)[l] = v[static_cast<std::size_t>(k)];
        }
    }
    return p;
}

template <ConservationLaw Sys>
CaseResult run_system(const Sys& sys, const RunConfig& cfg, const StepCallback& cb)
{
    const auto start = std::chrono::steady_clock::now();
    const Grid2D g = case_grid(cfg.case_id, cfg.resolved_nx(), cfg.resolved_ny());
    const Field u0 = init_case(cfg.case_id, g, cfg);
    const double T = cfg.resolved_T();

    KineticModel<Sys> model(sys, cfg.family, 1.0);
    const double kappa = model.monotone_speed_factor();
    auto pick_lambda = [&](const Field& u) {
        try {
            return kappa * subcharacteristic_lambda(sys, u, cfg.lambda_safety);
        } catch (const std::domain_error& e) {
            throw SolverFailure(std::string("wave-speed bound failed: ") + e.what());
        }
    };
    model.set_lambda(pick_lambda(u0));
    DecSolver<Sys> solver(model, g, cfg.resolved_scheme());
    solver.initialize(u0);

    CaseResult res{u0, u0, {}, {}, {}, {}, {}, {}, 0, 0.0, 0.0, 0.0};
    res.mass_initial = weighted_sums(u0, false);
    res.mass_scale = weighted_sums(u0, true);

    double t = 0.0;
    int n = 0;
    Field u = u0;
    while (t < T) {
        solver.set_lambda(pick_lambda(u));
        const double lam = solver.model().lambda();
        double dt = dt_from_cfl(g, lam, cfg.cfl);
        bool last = false;
        if (t + dt >= T * (1.0 - 1e-14)) {
            dt = T - t;
            last = true;
        }
        StepReport rep;
        try {
            rep = solver.step(dt);
        } catch (const SolverFailure& e) {
            throw SolverFailure("step " + std::to_string(n + 1) + " (t = " + std::to_string(t) + "): " + e.what());
        }
        t = last ? T : t + dt;
        ++n;
        u = solver.macroscopic();
        StepRecord rec{n, t, dt, lam, rep.trial_flagged_nodes, std::move(rep.flagged_quads), rep.mood_passes,
                       rep.fallback};
        if (cb) {
            cb(rec, u);
        }
        res.steps.push_back(std::move(rec));
    }

    res.conserved = u;
    res.primitive = to_primitive_field(sys, u);
    for (auto nm : Sys::primitive_names()) {
        res.names.emplace_back(nm);
    }
    res.mass_final = weighted_sums(u, false);
    const auto final_scale = weighted_sums(u, true);
    for (std::size_t k = 0; k < final_scale.size(); ++k) {
        res.mass_scale[k] = std::max(res.mass_scale[k], final_scale[k]);
    }
    res.step_count = n;
    res.final_time = t;
    res.lambda_final = solver.model().lambda();

    if (case_info(cfg.case_id).has_exact) {
        Field err(g, Sys::K);
        const VortexParams vp = cfg.vortex();
        for (int j = 0; j < g.ny(); ++j) {
            for (int i = 0; i < g.nx(); ++i) {
                if (cfg.case_id == CaseId::advection) {
                    err(i, j, 0) = res.primitive(i, j, 0) - advection_exact(g.x(i), g.y(j), t);
                } else {
                    const auto ex = vortex_exact(g.x(i), g.y(j), t, vp);
                    for (int k = 0; k < Sys::K; ++k) {
                        err(i, j, k) = res.primitive(i, j, k) - ex[static_cast<std::size_t>(k)];
                    }
                }
            }
        }
        for (int k = 0; k < Sys::K; ++k) {
            res.errors.push_back(discrete_norms(err, k));
        }
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

} // namespace detail

/// Runs a case from t = 0 to T. Throws SolverFailure when the solver cannot
/// produce an admissible state.
inline CaseResult run(const RunConfig& cfg, const StepCallback& cb = {})
{
    cfg.validate();
    if (is_scalar(cfg.case_id)) {
        return detail::run_system(Advection{}, cfg, cb);
    }
    return detail::run_system(Euler(EulerParams{cfg.gamma}), cfg, cb);
}

struct ConvergenceRow {
    int nx{0};
    double h{0.0};
    Norms err;
    std::optional<Norms> slope; // against the previous (coarser) row
};

/// log(e_coarse / e_fine) / log(h_coarse / h_fine).
inline double observed_order(double h_coarse, double e_coarse, double h_fine, double e_fine)
{
    return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

inline void fill_slopes(std::vector<ConvergenceRow>& rows)
{
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& a = rows[i - 1];
        const auto& b = rows[i];
        rows[i].slope = Norms{observed_order(a.h, a.err.l1, b.h, b.err.l1),
                              observed_order(a.h, a.err.l2, b.h, b.err.l2),
                              observed_order(a.h, a.err.linf, b.h, b.err.linf)};
    }
}

/// Runs `levels` grids starting at cfg's nx, doubling each time. The error of
/// the first primitive component (u, or rho for the vortex) is tabulated.
inline std::vector<ConvergenceRow> convergence_study(RunConfig cfg, int levels)
{
    if (!case_info(cfg.case_id).has_exact) {
        throw std::invalid_argument("convergence study needs a case with an exact solution");
    }
    if (levels < 2) {
        throw std::invalid_argument("convergence study needs at least 2 levels");
    }
    const int nx0 = cfg.resolved_nx();
    const int ny0 = cfg.resolved_ny();
    std::vector<ConvergenceRow> rows;
    for (int l = 0; l < levels; ++l) {
        cfg.nx = nx0 << l;
        cfg.ny = ny0 << l;
        const CaseResult r = run(cfg);
        rows.push_back({cfg.nx, case_grid(cfg.case_id, cfg.nx, cfg.ny).dx(), r.errors.at(0), std::nullopt});
    }
    fill_slopes(rows);
    return rows;
}

} // namespace kdec
