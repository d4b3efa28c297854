#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <numbers>
#include <stdexcept>
#include <string_view>

namespace kdec {

/// A hyperbolic system u_t + A1(u)_x + A2(u)_y = 0 with K components.
template <class S>
concept ConservationLaw = requires(const S& s, const typename S::State& u) {
    { S::K } -> std::convertible_to<int>;
    { s.flux1(u) } -> std::same_as<typename S::State>;
    { s.flux2(u) } -> std::same_as<typename S::State>;
    { s.max_speed(u) } -> std::convertible_to<double>;
    { s.admissible(u) } -> std::same_as<bool>;
    { s.to_primitive(u) } -> std::same_as<typename S::State>;
    { s.from_primitive(u) } -> std::same_as<typename S::State>;
    { S::primitive_names() };
};

/// Unit-speed scalar advection u_t + u_x + u_y = 0.
struct Advection {
    static constexpr int K = 1;
    using State = std::array<double, 1>;

    [[nodiscard]] State flux1(const State& u) const noexcept { return u; }
    [[nodiscard]] State flux2(const State& u) const noexcept { return u; }
    [[nodiscard]] double max_speed(const State&) const noexcept { return 1.0; }
    [[nodiscard]] bool admissible(const State& u) const noexcept { return std::isfinite(u[0]); }
    [[nodiscard]] State to_primitive(const State& u) const noexcept { return u; }
    [[nodiscard]] State from_primitive(const State& v) const noexcept { return v; }
    static constexpr std::array<std::string_view, 1> primitive_names() { return {"u"}; }
};

inline Advection advection_system() { return {}; }

struct EulerParams {
    double gamma{1.4};
};

/// 2D compressible Euler, conserved variables (rho, rho vx, rho vy, E), ideal gas.
class Euler {
public:
    static constexpr int K = 4;
    using State = std::array<double, 4>;

    explicit Euler(EulerParams p = {}) : gamma_(p.gamma)
    {
        if (!(p.gamma > 1.0)) {
            throw std::invalid_argument("Euler: gamma must exceed 1");
        }
    }

    [[nodiscard]] double gamma() const noexcept { return gamma_; }

    [[nodiscard]] double pressure(const State& u) const noexcept
    {
        return (gamma_ - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0]);
    }

    [[nodiscard]] State flux1(const State& u) const noexcept
    {
        const double vx = u[1] / u[0];
        const double p = pressure(u);
        return {u[1], u[1] * vx + p, u[2] * vx, (u[3] + p) * vx};
    }

    [[nodiscard]] State flux2(const State& u) const noexcept
    {
        const double vy = u[2] / u[0];
        const double p = pressure(u);
        return {u[2], u[1] * vy, u[2] * vy + p, (u[3] + p) * vy};
    }

    [[nodiscard]] bool admissible(const State& u) const noexcept
    {
        // negated comparisons so that NaN is rejected
        if (!(u[0] > 0.0)) {
            return false;
        }
        const double p = pressure(u);
        return p > 0.0 && std::isfinite(p) && std::isfinite(u[1]) && std::isfinite(u[2]);
    }

    /// max(|vx|, |vy|) + c; an upper bound for both flux Jacobian spectral radii.
    [[nodiscard]] double max_speed(const State& u) const
    {
        if (!admissible(u)) {
            throw std::domain_error("Euler::max_speed: non-admissible state");
        }
        const double c = std::sqrt(gamma_ * pressure(u) / u[0]);
        return std::max(std::abs(u[1]), std::abs(u[2])) / u[0] + c;
    }

    [[nodiscard]] State to_primitive(const State& u) const noexcept
    {
        return {u[0], u[1] / u[0], u[2] / u[0], pressure(u)};
    }

    [[nodiscard]] State from_primitive(const State& v) const noexcept
    {
        const double rho = v[0];
        return {rho, rho * v[1], rho * v[2],
                v[3] / (gamma_ - 1.0) + 0.5 * rho * (v[1] * v[1] + v[2] * v[2])};
    }

    static constexpr std::array<std::string_view, 4> primitive_names()
    {
        return {"rho", "vx", "vy", "p"};
    }

private:
    double gamma_;
};

inline Euler euler_system(EulerParams p = {}) { return Euler(p); }

static_assert(ConservationLaw<Advection>);
static_assert(ConservationLaw<Euler>);

/// The isentropic vortex literature quotes two free-stream y-velocities; the
/// one inside the velocity formula (sqrt(2)/2) is the default.
enum class VortexDrift { formula, freestream };

struct VortexParams {
    double gamma{1.4};
    double beta{5.0};
    double vx_inf{1.0};
    double vy_inf{std::numbers::sqrt2 / 2.0};
    double half_width{10.0};

    static VortexParams with_drift(VortexDrift d)
    {
        VortexParams p;
        p.vy_inf = d == VortexDrift::formula ? std::numbers::sqrt2 / 2.0
                                             : std::numbers::sqrt3 / 2.0;
        return p;
    }
};

/// Exact isentropic vortex, primitive (rho, vx, vy, p), on the periodic box
/// [-w, w]^2; the centre drifts with the free stream and re-enters modulo 2w.
inline std::array<double, 4> vortex_exact(double x, double y, double t, const VortexParams& p = {})
{
    const double period = 2.0 * p.half_width;
    auto periodic_offset = [&](double d) {
        d = std::fmod(d + p.half_width, period);
        if (d < 0.0) {
            d += period;
        }
        return d - p.half_width;
    };
    const double dx = periodic_offset(x - t * p.vx_inf);
    const double dy = periodic_offset(y - t * p.vy_inf);
    const double r2 = dx * dx + dy * dy;
    const double g = p.gamma;
    constexpr double pi = std::numbers::pi;
    const double rho = std::pow(1.0 - (g - 1.0) * p.beta * p.beta / (32.0 * g * pi * pi) *
                                          std::exp(1.0 - r2),
                                1.0 / (g - 1.0));
    const double swirl = p.beta / (4.0 * pi) * std::exp(0.5 * (1.0 - r2));
    return {rho, p.vx_inf - swirl * dy, p.vy_inf + swirl * dx, std::pow(rho, g)};
}

} // namespace kdec
