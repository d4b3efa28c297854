#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kdec {

/// Flux-limiter window. The limited delta is d1 * (1 + theta(r) r) with the
/// ratio r = (dh - d1) / d1 clipped into [-6 + alpha, 6(mbound - 1) - alpha].
struct LimiterParams {
    double mbound{2.0};
    double alpha{1.0};

    void validate() const
    {
        if (!(mbound >= 1.0)) {
            throw std::invalid_argument("LimiterParams: M must be >= 1");
        }
        const double top = std::min(6.0, 6.0 * (mbound - 1.0));
        if (!(alpha > 0.0 && alpha < top)) {
            throw std::invalid_argument("LimiterParams: alpha must lie in (0, min(6, 6(M-1)))");
        }
    }
    [[nodiscard]] double lower() const noexcept { return -6.0 + alpha; }
    [[nodiscard]] double upper() const noexcept { return 6.0 * (mbound - 1.0) - alpha; }
};

/// theta(r): 1 inside the window, otherwise the factor that maps r onto the
/// nearest window edge.
inline double limiter_theta(double r, const LimiterParams& p) noexcept
{
    if (r < p.lower()) {
        return p.lower() / r;
    }
    if (r > p.upper()) {
        return p.upper() / r;
    }
    return 1.0;
}

/// Weight psi in [0, 1] of the high-order part in d1 + psi (dh - d1).
/// For d1 == 0 the ratio is infinite and the blend degenerates to d1 = 0,
/// except when dh is itself round-off small relative to `scale`.
inline double limiter_weight(double d1, double dh, const LimiterParams& p, double scale = 1.0,
                             double tol = 1e-12) noexcept
{
    if (d1 == 0.0) {
        return std::abs(dh) <= tol * scale ? 1.0 : 0.0;
    }
    const double r = (dh - d1) / d1;
    if (r >= p.lower() && r <= p.upper()) {
        return 1.0;
    }
    return limiter_theta(r, p);
}

/// Blend of a first-order delta d1 and a high-order delta dh:
/// d1 + psi(d1, dh) (dh - d1). Smooth data (ratio near 0) returns dh.
inline double limited_delta(double d1, double dh, const LimiterParams& p, double scale = 1.0,
                            double tol = 1e-12) noexcept
{
    const double w = limiter_weight(d1, dh, p, scale, tol);
    return w == 1.0 ? dh : d1 + w * (dh - d1);
}

} // namespace kdec
