#pragma once

#include "kdec/grid.hpp"
#include "kdec/systems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kdec {

/// Discrete-velocity family. four_wave is general(J = 1, N' = 1).
struct WaveFamily {
    enum class Kind { four_wave, general };
    Kind kind{Kind::four_wave};
    int rings{1};      // J
    int directions{1}; // N'; 4N' directions per ring

    static WaveFamily four_wave() { return {}; }
    static WaveFamily general(int J, int Nprime) { return {Kind::general, J, Nprime}; }

    [[nodiscard]] int waves() const noexcept { return 4 * directions * rings; }
    [[nodiscard]] std::string name() const
    {
        return kind == Kind::four_wave
                   ? std::string("four")
                   : "general(J=" + std::to_string(rings) + ",N'=" + std::to_string(directions) + ")";
    }
};

namespace detail {

// cos/sin of j*pi/(2N') with exact zeros and units on the axes
inline double snap(double v)
{
    if (std::abs(v) < 1e-15) {
        return 0.0;
    }
    if (std::abs(std::abs(v) - 1.0) < 1e-15) {
        return std::copysign(1.0, v);
    }
    return v;
}

} // namespace detail

/// BGK relaxation model with N scalar waves per macroscopic component.
///
/// Wave i moves with velocity (lamx[i], lamy[i]); the Maxwellian is the affine
/// family M_i(u) = u/N + lamx[i] A1(u)/ax2 + lamy[i] A2(u)/ay2 where
/// ax2 = sum lamx^2 and ay2 = sum lamy^2. Under the moment conditions
/// sum lamx = sum lamy = sum lamx*lamy = 0 this gives P M(u) = u and
/// P Lambda_d M(u) = A_d(u).
template <ConservationLaw Sys>
class KineticModel {
public:
    using State = typename Sys::State;
    static constexpr int K = Sys::K;

    KineticModel(Sys sys, WaveFamily family, double lambda) : sys_(std::move(sys)), family_(family)
    {
        if (family.rings < 1 || family.directions < 1) {
            throw std::invalid_argument("KineticModel: J and N' must be >= 1");
        }
        const int J = family.rings;
        const int Np = family.directions;
        for (int m = 1; m <= J; ++m) {
            const double ring = static_cast<double>(m) / J;
            for (int j = 1; j <= 4 * Np; ++j) {
                const double angle = j * std::numbers::pi / (2.0 * Np);
                unit_x_.push_back(ring * detail::snap(std::cos(angle)));
                unit_y_.push_back(ring * detail::snap(std::sin(angle)));
            }
        }
        set_lambda(lambda);
        verify_consistency();
    }

    [[nodiscard]] const Sys& system() const noexcept { return sys_; }
    [[nodiscard]] const WaveFamily& family() const noexcept { return family_; }
    [[nodiscard]] int waves() const noexcept { return static_cast<int>(unit_x_.size()); }
    [[nodiscard]] int kinetic_components() const noexcept { return waves() * K; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] double lamx(int i) const noexcept { return lamx_[i]; }
    [[nodiscard]] double lamy(int i) const noexcept { return lamy_[i]; }
    [[nodiscard]] std::span<const double> lamx() const noexcept { return lamx_; }
    [[nodiscard]] std::span<const double> lamy() const noexcept { return lamy_; }

    void set_lambda(double lambda)
    {
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw std::invalid_argument("KineticModel: lambda must be positive");
        }
        lambda_ = lambda;
        const auto n = unit_x_.size();
        lamx_.resize(n);
        lamy_.resize(n);
        double ax2 = 0.0;
        double ay2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lamx_[i] = lambda * unit_x_[i];
            lamy_[i] = lambda * unit_y_[i];
            ax2 += lamx_[i] * lamx_[i];
            ay2 += lamy_[i] * lamy_[i];
        }
        coef_x_.resize(n);
        coef_y_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            coef_x_[i] = lamx_[i] / ax2;
            coef_y_[i] = lamy_[i] / ay2;
        }
    }

    /// Writes the N*K Maxwellian values, wave-major (out[i*K + k]).
    void maxwellian(const State& u, std::span<double> out) const
    {
        const State a1 = sys_.flux1(u);
        const State a2 = sys_.flux2(u);
        const double inv_n = 1.0 / waves();
        for (int i = 0; i < waves(); ++i) {
            for (int k = 0; k < K; ++k) {
                out[static_cast<std::size_t>(i * K + k)] =
                    u[k] * inv_n + coef_x_[i] * a1[k] + coef_y_[i] * a2[k];
            }
        }
    }

    [[nodiscard]] std::vector<double> maxwellian(const State& u) const
    {
        std::vector<double> m(static_cast<std::size_t>(kinetic_components()));
        maxwellian(u, m);
        return m;
    }

    /// Smallest lambda/max_speed ratio keeping every dM_i/du positive
    /// semi-definite when both flux Jacobians have spectral radius <= max_speed.
    [[nodiscard]] double monotone_speed_factor() const noexcept
    {
        double ax2 = 0.0;
        double ay2 = 0.0;
        for (std::size_t i = 0; i < unit_x_.size(); ++i) {
            ax2 += unit_x_[i] * unit_x_[i];
            ay2 += unit_y_[i] * unit_y_[i];
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < unit_x_.size(); ++i) {
            worst = std::max(worst, std::abs(unit_x_[i]) / ax2 + std::abs(unit_y_[i]) / ay2);
        }
        return worst * waves();
    }

private:
    // The Maxwellian is affine in (u, A1, A2), so consistency for every state
    // reduces to six linear identities on the coefficients.
    void verify_consistency() const
    {
        double sx = 0.0, sy = 0.0, sxy = 0.0, cx = 0.0, cy = 0.0;
        double xx = 0.0, yy = 0.0, xy = 0.0, yx = 0.0;
        for (int i = 0; i < waves(); ++i) {
            sx += lamx_[i];
            sy += lamy_[i];
            sxy += lamx_[i] * lamy_[i];
            cx += coef_x_[i];
            cy += coef_y_[i];
            xx += lamx_[i] * coef_x_[i];
            yy += lamy_[i] * coef_y_[i];
            xy += lamx_[i] * coef_y_[i];
            yx += lamy_[i] * coef_x_[i];
        }
        const double tol = 1e-10;
        const double l = lambda_;
        const bool ok = std::abs(sx) <= tol * l * waves() && std::abs(sy) <= tol * l * waves() &&
                        std::abs(sxy) <= tol * l * l * waves() && std::abs(cx) * l <= tol &&
                        std::abs(cy) * l <= tol && std::abs(xx - 1.0) <= tol &&
                        std::abs(yy - 1.0) <= tol && std::abs(xy) <= tol && std::abs(yx) <= tol;
        if (!ok) {
            throw std::logic_error("KineticModel: velocity set " + family_.name() +
                                   " violates the Maxwellian consistency relations");
        }
    }

    Sys sys_;
    WaveFamily family_;
    double lambda_{1.0};
    std::vector<double> unit_x_, unit_y_;
    std::vector<double> lamx_, lamy_;
    std::vector<double> coef_x_, coef_y_;
};

template <ConservationLaw Sys>
KineticModel<Sys> four_wave_model(Sys sys, double lambda)
{
    return KineticModel<Sys>(std::move(sys), WaveFamily::four_wave(), lambda);
}

template <ConservationLaw Sys>
KineticModel<Sys> general_model(Sys sys, int J, int Nprime, double lambda)
{
    return KineticModel<Sys>(std::move(sys), WaveFamily::general(J, Nprime), lambda);
}

/// u = P f: per node and component, the sum over waves.
inline Field project(const Field& f, int K)
{
    if (K < 1 || f.ncomp() % K != 0) {
        throw std::invalid_argument("project: ncomp is not a multiple of K");
    }
    const int n = f.ncomp() / K;
    Field u(f.grid(), K);
    for (int k = 0; k < K; ++k) {
        auto out = u.plane(k);
        for (int i = 0; i < n; ++i) {
            const auto in = f.plane(i * K + k);
            for (std::size_t l = 0; l < out.size(); ++l) {
                out[l] += in[l];
            }
        }
    }
    return u;
}

template <ConservationLaw Sys>
typename Sys::State state_at(const Field& u, std::size_t node)
{
    typename Sys::State s{};
    for (int k = 0; k < Sys::K; ++k) {
        s[k] = u.plane(k)[node];
    }
    return s;
}

/// f = M(u) at every node.
template <ConservationLaw Sys>
Field equilibrium(const KineticModel<Sys>& model, const Field& u)
{
    Field f(u.grid(), model.kinetic_components());
    std::vector<double> m(static_cast<std::size_t>(model.kinetic_components()));
    for (std::size_t l = 0; l < u.grid().nodes(); ++l) {
        model.maxwellian(state_at<Sys>(u, l), m);
        for (int c = 0; c < f.ncomp(); ++c) {
            f.plane(c)[l] = m[static_cast<std::size_t>(c)];
        }
    }
    return f;
}

/// safety * max over nodes of the system's characteristic speed bound.
template <ConservationLaw Sys>
double subcharacteristic_lambda(const Sys& sys, const Field& u, double safety)
{
    if (!(safety >= 1.0)) {
        throw std::invalid_argument("subcharacteristic_lambda: safety must be >= 1");
    }
    double s = 0.0;
    for (std::size_t l = 0; l < u.grid().nodes(); ++l) {
        s = std::max(s, sys.max_speed(state_at<Sys>(u, l)));
    }
    return safety * s;
}

struct ConsistencyResidual {
    double mass{0.0};   // |P M(u) - u|
    double flux_x{0.0}; // |P Lx M(u) - A1(u)|
    double flux_y{0.0}; // |P Ly M(u) - A2(u)|
    [[nodiscard]] double max() const { return std::max({mass, flux_x, flux_y}); }
};

/// Relative residuals of the Maxwellian consistency relations at one state.
template <ConservationLaw Sys>
ConsistencyResidual consistency_residual(const KineticModel<Sys>& model,
                                         const typename Sys::State& u)
{
    constexpr int K = Sys::K;
    const auto m = model.maxwellian(u);
    const auto a1 = model.system().flux1(u);
    const auto a2 = model.system().flux2(u);
    double un = 0.0, an = 0.0;
    for (int k = 0; k < K; ++k) {
        un = std::max(un, std::abs(u[k]));
        an = std::max({an, std::abs(a1[k]), std::abs(a2[k])});
    }
    const double lam = model.lambda();
    const double mass_scale = std::max(un + an / lam, 1e-300);
    const double flux_scale = std::max(an + lam * un, 1e-300);
    ConsistencyResidual r;
    for (int k = 0; k < K; ++k) {
        double pm = 0.0, px = 0.0, py = 0.0;
        for (int i = 0; i < model.waves(); ++i) {
            const double mi = m[static_cast<std::size_t>(i * K + k)];
            pm += mi;
            px += model.lamx(i) * mi;
            py += model.lamy(i) * mi;
        }
        r.mass = std::max(r.mass, std::abs(pm - u[k]) / mass_scale);
        r.flux_x = std::max(r.flux_x, std::abs(px - a1[k]) / flux_scale);
        r.flux_y = std::max(r.flux_y, std::abs(py - a2[k]) / flux_scale);
    }
    return r;
}

} // namespace kdec
