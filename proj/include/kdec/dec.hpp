#pragma once

#include "kdec/grid.hpp"
#include "kdec/kinetic.hpp"
#include "kdec/limiter.hpp"
#include "kdec/mood.hpp"
#include "kdec/quadrature.hpp"
#include "kdec/stencil.hpp"
#include "kdec/transport.hpp"

#include <cmath>
#include <algorithm>
#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kdec {

enum class Stabilizer { none, limiter, mood };

inline std::string to_string(Stabilizer s)
{
    switch (s) {
    case Stabilizer::none: return "none";
    case Stabilizer::limiter: return "limiter";
    case Stabilizer::mood: return "mood";
    }
    return "?";
}

struct SchemeConfig {
    int time_order{4};
    int space_order{4};
    int iterations{0}; // corrections per step; 0 selects time_order + 1
    double eps{1e-10};
    Stabilizer stabilizer{Stabilizer::none};
    LimiterParams limiter{};
    int mood_passes{3};

    [[nodiscard]] int corrections() const noexcept { return iterations > 0 ? iterations : time_order + 1; }

    void validate() const
    {
        if (time_order != 1 && time_order != 2 && time_order != 4) {
            throw std::invalid_argument("time order must be 1, 2 or 4");
        }
        if (space_order < 1 || space_order > 4) {
            throw std::invalid_argument("space order must be 1..4");
        }
        if (iterations < 0) {
            throw std::invalid_argument("iterations must be >= 1 (or 0 for the default)");
        }
        if (!(eps > 0.0)) {
            throw std::invalid_argument("eps must be positive");
        }
        if (mood_passes < 1) {
            throw std::invalid_argument("mood_passes must be >= 1");
        }
        limiter.validate();
    }
};

/// Raised when no admissible update could be produced.
class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double dt_from_cfl(const Grid2D& g, double lambda, double cfl)
{
    if (!(lambda > 0.0) || !(cfl > 0.0)) {
        throw std::invalid_argument("dt_from_cfl: lambda and cfl must be positive");
    }
    return cfl * std::min(g.dx(), g.dy()) / lambda;
}

struct StepReport {
    std::size_t trial_flagged_nodes{0};
    std::vector<std::size_t> flagged_quads; // quad (i, j) stored as node(i, j)
    int mood_passes{0};
    bool fallback{false};
};

/// Kinetic BGK solver advanced by defect correction.
///
/// One correction r -> r+1 of the sub-step values F = (f^1..f^M):
///   G_q     = f^0 - dt (sum_k W_qk D f^k + w0_q D f^0)
///   u_q     = P G_q                            (explicit, P kills the source)
///   f^q_new = sum_p [inv_qp G_p + relax_qp M(u_p)] + relax0_q (M(P f^0) - f^0)
/// with D the spatial operator and inv, relax, relax0 the cached blocks of
/// (I + dt/eps W)^{-1}.
template <ConservationLaw Sys>
class DecSolver {
public:
    static constexpr int K = Sys::K;
    using Observer = std::function<void(int correction, std::span<const Field> stages)>;

    DecSolver(KineticModel<Sys> model, const Grid2D& grid, SchemeConfig cfg)
        : model_(std::move(model)),
          grid_(grid),
          cfg_((cfg.validate(), cfg)),
          table_(QuadratureTable::for_order(cfg.time_order)),
          transport_(grid, named_operator(cfg.space_order), named_operator(1), K),
          transport_low_(grid, named_operator(1), named_operator(1), K),
          f_(grid, model_.kinetic_components()),
          f0_(grid, model_.kinetic_components()),
          d0_(grid, model_.kinetic_components()),
          neq0_(grid, model_.kinetic_components())
    {
        for (int q = 0; q < QuadratureTable::kMaxStages; ++q) {
            stage_.emplace_back(grid, model_.kinetic_components());
            dk_.emplace_back(grid, model_.kinetic_components());
            mk_.emplace_back(grid, model_.kinetic_components());
        }
    }

    [[nodiscard]] const KineticModel<Sys>& model() const noexcept { return model_; }
    [[nodiscard]] const SchemeConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] const QuadratureTable& table() const noexcept { return table_; }
    [[nodiscard]] const Grid2D& grid() const noexcept { return grid_; }
    [[nodiscard]] const Field& kinetic() const noexcept { return f_; }
    [[nodiscard]] Field macroscopic() const { return project(f_, K); }

    /// f = M(u0).
    void initialize(const Field& u0)
    {
        check_grid(u0, K);
        f_ = equilibrium(model_, u0);
    }

    void set_kinetic(const Field& f)
    {
        check_grid(f, model_.kinetic_components());
        f_ = f;
    }

    /// Changes lambda, keeping P f and the non-equilibrium part f - M(P f).
    void set_lambda(double lambda)
    {
        if (lambda == model_.lambda()) {
            return;
        }
        maxwellian_of(f_, mk_[0]);
        model_.set_lambda(lambda);
        maxwellian_of(f_, mk_[1]);
        auto f = f_.data();
        const auto mo = mk_[0].data();
        const auto mn = mk_[1].data();
        for (std::size_t e = 0; e < f.size(); ++e) {
            f[e] += mn[e] - mo[e];
        }
    }

    /// One unstabilized (or limited) DeC step with the configured scheme.
    void dec_step(double dt, const Observer& obs = {}, int corrections = 0)
    {
        f0_ = f_;
        const int R = corrections > 0 ? corrections : cfg_.corrections();
        core(dt, table_, R, transport_, base_mode(), nullptr, nullptr, obs ? &obs : nullptr);
    }

    /// One time step including the configured stabilization.
    StepReport step(double dt)
    {
        StepReport rep;
        if (!(dt > 0.0)) {
            throw std::invalid_argument("step: dt must be positive");
        }
        f0_ = f_;
        const int R = cfg_.corrections();
        if (cfg_.stabilizer != Stabilizer::mood) {
            core(dt, table_, R, transport_, base_mode(), nullptr, nullptr, nullptr);
            if (!f_.all_finite()) {
                throw SolverFailure("non-finite kinetic values");
            }
            return rep;
        }

        ensure_history(R);
        core(dt, table_, R, transport_, FluxMode{}, nullptr, &history_, nullptr);
        MoodFlags flags = mood_detect(project(f_, K), model_.system());
        rep.trial_flagged_nodes = flags.node_count();
        if (!flags.any()) {
            return rep;
        }

        for (int pass = 0; pass < cfg_.mood_passes; ++pass) {
            const EdgeWeights w = mood_edge_weights(grid_, flags);
            FluxMode mode;
            mode.kind = FluxMode::Kind::mixed;
            mode.weights = &w;
            core(dt, table_, R, transport_, mode, &history_, nullptr, nullptr);
            ++rep.mood_passes;
            const MoodFlags again = mood_detect(project(f_, K), model_.system());
            if (!again.any()) {
                record_quads(flags, rep);
                return rep;
            }
            for (std::size_t l = 0; l < flags.node.size(); ++l) {
                flags.node[l] |= again.node[l];
            }
            dilate(grid_, flags);
        }

        rep.fallback = true;
        record_quads(flags, rep);
        core(dt, QuadratureTable::for_order(1), 1, transport_low_, FluxMode{}, nullptr, nullptr, nullptr);
        if (mood_detect(project(f_, K), model_.system()).any()) {
            throw SolverFailure("first-order fallback produced non-admissible states");
        }
        return rep;
    }

    /// Trial step followed by the mixed-order recompute for a given flag
    /// pattern, without admissibility checks.
    void recompute_with_flags(double dt, const MoodFlags& flags)
    {
        f0_ = f_;
        const int R = cfg_.corrections();
        ensure_history(R);
        core(dt, table_, R, transport_, FluxMode{}, nullptr, &history_, nullptr);
        const EdgeWeights w = mood_edge_weights(grid_, flags);
        FluxMode mode;
        mode.kind = FluxMode::Kind::mixed;
        mode.weights = &w;
        core(dt, table_, R, transport_, mode, &history_, nullptr, nullptr);
    }

    /// D f with the high-order operator.
    [[nodiscard]] Field spatial_increment(const Field& f) const
    {
        Field out(grid_, model_.kinetic_components());
        transport_.apply(f, out, model_.lamx(), model_.lamy(), FluxMode{});
        return out;
    }

    /// Pointwise high-order defect of sub-step q:
    /// f^q - f^0 + dt sum_k (W_qk D f^k) + dt w0_q D f^0
    ///   - dt/eps [sum_k W_qk (M(P f^k) - f^k) + w0_q (M(P f^0) - f^0)].
    [[nodiscard]] Field l2_residual(const Field& f0, std::span<const Field> stages, double dt, int q) const
    {
        if (static_cast<int>(stages.size()) != table_.stages || q < 0 || q >= table_.stages) {
            throw std::invalid_argument("l2_residual: stage count or index mismatch");
        }
        const double eta = dt / cfg_.eps;
        Field out = stages[static_cast<std::size_t>(q)];
        auto o = out.data();
        const auto a = f0.data();
        auto accumulate = [&](const Field& f, double w) {
            if (w == 0.0) {
                return;
            }
            const Field d = spatial_increment(f);
            Field m(grid_, model_.kinetic_components());
            maxwellian_of(f, m);
            const auto dd = d.data();
            const auto mm = m.data();
            const auto ff = f.data();
            for (std::size_t e = 0; e < o.size(); ++e) {
                o[e] += dt * w * dd[e] - eta * w * (mm[e] - ff[e]);
            }
        };
        for (std::size_t e = 0; e < o.size(); ++e) {
            o[e] -= a[e];
        }
        accumulate(f0, table_.w0[static_cast<std::size_t>(q)]);
        for (int k = 0; k < table_.stages; ++k) {
            accumulate(stages[static_cast<std::size_t>(k)], table_.W[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)]);
        }
        return out;
    }

    /// Out = M(P f), node by node.
    void maxwellian_of(const Field& f, Field& out) const
    {
        const int nw = model_.waves();
        const int nc = model_.kinetic_components();
        const auto nodes = static_cast<long>(grid_.nodes());
#ifdef _OPENMP
#pragma omp parallel
#endif
        {
            std::vector<double> m(static_cast<std::size_t>(nc));
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
            for (long l = 0; l < nodes; ++l) {
                typename Sys::State u{};
                for (int i = 0; i < nw; ++i) {
                    for (int k = 0; k < K; ++k) {
                        u[k] += f.plane(i * K + k)[static_cast<std::size_t>(l)];
                    }
                }
                model_.maxwellian(u, m);
                for (int c = 0; c < nc; ++c) {
                    out.plane(c)[static_cast<std::size_t>(l)] = m[static_cast<std::size_t>(c)];
                }
            }
        }
    }

private:
    void check_grid(const Field& f, int ncomp) const
    {
        if (!(f.grid() == grid_) || f.ncomp() != ncomp) {
            throw std::invalid_argument("DecSolver: field does not match grid or component count");
        }
    }

    void ensure_history(int R)
    {
        const auto need = static_cast<std::size_t>((R - 1) * table_.stages);
        while (history_.size() < need) {
            history_.emplace_back(grid_, model_.kinetic_components());
        }
    }

    [[nodiscard]] FluxMode base_mode() const noexcept
    {
        FluxMode m;
        if (cfg_.stabilizer == Stabilizer::limiter) {
            m.kind = FluxMode::Kind::limited;
            m.limiter = &cfg_.limiter;
        }
        return m;
    }

    void record_quads(const MoodFlags& flags, StepReport& rep) const
    {
        rep.flagged_quads.clear();
        for (std::size_t l = 0; l < flags.quad.size(); ++l) {
            if (flags.quad[l]) {
                rep.flagged_quads.push_back(l);
            }
        }
    }

    // Advances f0_ into f_. `frozen` supplies the high-order flux source for
    // weight-0 edges in mixed mode (stage values of correction r >= 1 at
    // index (r-1)*M + k); `record` receives the same values of this run.
    void core(double dt, const QuadratureTable& tab, int R, const Transport& tr, FluxMode mode,
              const std::vector<Field>* frozen, std::vector<Field>* record, const Observer* obs)
    {
        const int M = tab.stages;
        const RelaxationBlocks blk = RelaxationBlocks::make(tab, dt / cfg_.eps);
        const auto lx = model_.lamx();
        const auto ly = model_.lamy();

        maxwellian_of(f0_, neq0_);
        {
            auto n = neq0_.data();
            const auto a = f0_.data();
            for (std::size_t e = 0; e < n.size(); ++e) {
                n[e] -= a[e];
            }
        }
        mode.frozen = &f0_;
        tr.apply(f0_, d0_, lx, ly, mode);
        for (int q = 0; q < M; ++q) {
            stage_[static_cast<std::size_t>(q)] = f0_;
        }

        const auto a = f0_.data();
        const auto d0 = d0_.data();
        const std::size_t total = a.size();
        for (int r = 0; r < R; ++r) {
            std::array<const double*, QuadratureTable::kMaxStages> dk{d0.data(), d0.data()};
            if (r > 0) {
                for (int k = 0; k < M; ++k) {
                    const auto ks = static_cast<std::size_t>(k);
                    const auto hi = static_cast<std::size_t>((r - 1) * M + k);
                    if (record != nullptr) {
                        (*record)[hi] = stage_[ks];
                    }
                    if (frozen != nullptr) {
                        mode.frozen = &(*frozen)[hi];
                    }
                    tr.apply(stage_[ks], dk_[ks], lx, ly, mode);
                    dk[ks] = dk_[ks].data().data();
                }
            }
            for (int q = 0; q < M; ++q) {
                const auto qs = static_cast<std::size_t>(q);
                double* g = stage_[qs].data().data();
                const double w0 = tab.w0[qs];
                if (M == 1) {
                    const double w = tab.W[qs][0];
                    for (std::size_t e = 0; e < total; ++e) {
                        g[e] = a[e] - dt * (w * dk[0][e] + w0 * d0[e]);
                    }
                } else {
                    const double wa = tab.W[qs][0];
                    const double wb = tab.W[qs][1];
                    for (std::size_t e = 0; e < total; ++e) {
                        g[e] = a[e] - dt * (wa * dk[0][e] + wb * dk[1][e] + w0 * d0[e]);
                    }
                }
            }
            for (int q = 0; q < M; ++q) {
                maxwellian_of(stage_[static_cast<std::size_t>(q)], mk_[static_cast<std::size_t>(q)]);
            }
            const auto nq = neq0_.data();
            if (M == 1) {
                double* g = stage_[0].data().data();
                const double* m = mk_[0].data().data();
                const double i00 = blk.inv[0][0];
                const double r00 = blk.relax[0][0];
                const double c0 = blk.relax0[0];
                for (std::size_t e = 0; e < total; ++e) {
                    g[e] = i00 * g[e] + r00 * m[e] + c0 * nq[e];
                }
            } else {
                double* g0 = stage_[0].data().data();
                double* g1 = stage_[1].data().data();
                const double* m0 = mk_[0].data().data();
                const double* m1 = mk_[1].data().data();
                const auto& iv = blk.inv;
                const auto& rl = blk.relax;
                for (std::size_t e = 0; e < total; ++e) {
                    const double a0 = g0[e];
                    const double a1 = g1[e];
                    g0[e] = iv[0][0] * a0 + iv[0][1] * a1 + rl[0][0] * m0[e] + rl[0][1] * m1[e] +
                            blk.relax0[0] * nq[e];
                    g1[e] = iv[1][0] * a0 + iv[1][1] * a1 + rl[1][0] * m0[e] + rl[1][1] * m1[e] +
                            blk.relax0[1] * nq[e];
                }
            }
            if (obs != nullptr) {
                (*obs)(r, std::span<const Field>(stage_.data(), static_cast<std::size_t>(M)));
            }
        }
        f_ = stage_[static_cast<std::size_t>(M - 1)];
    }

    KineticModel<Sys> model_;
    Grid2D grid_;
    SchemeConfig cfg_;
    QuadratureTable table_;
    Transport transport_;
    Transport transport_low_;
    Field f_;
    Field f0_;
    Field d0_;
    Field neq0_;
    std::vector<Field> stage_;
    std::vector<Field> dk_;
    std::vector<Field> mk_;
    std::vector<Field> history_;
};

} // namespace kdec
