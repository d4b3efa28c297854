#pragma once

#include "kdec/grid.hpp"

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdec {

enum class Axis { x, y };

/// Interpolatory upwind difference for positive speed:
/// delta f_i = sum_{k=lo}^{hi} alpha_k f_{i+k} ~ dx * f'(x_i), order q = hi - lo.
/// Flux form: delta f_i = fhat_{i+1/2} - fhat_{i-1/2} with
/// fhat_{i+1/2} = sum_{k=lo+1}^{hi} beta_k f_{i+k}, beta_k = sum_{m>=k} alpha_m.
struct StencilOperator {
    int order{1};
    int lo{-1}; // most upwind offset (-r)
    int hi{0};  // most downwind offset (s)
    std::vector<double> alpha; // offsets lo..hi
    std::vector<double> beta;  // offsets lo+1..hi
    double error_constant{0.0};

    [[nodiscard]] double a(int k) const { return alpha.at(static_cast<std::size_t>(k - lo)); }
    [[nodiscard]] double b(int k) const { return beta.at(static_cast<std::size_t>(k - lo - 1)); }
    [[nodiscard]] int width() const noexcept { return hi - lo + 1; }
    /// Cells needed on either side of a node, for either speed sign.
    [[nodiscard]] int reach() const noexcept { return std::max(-lo, hi) + 1; }
};

namespace detail {

inline double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

} // namespace detail

/// [r, s] interpolatory method: r upwind points, s downwind points.
inline StencilOperator interpolatory_coeffs(int r, int s)
{
    if (r < 0 || s < 0 || r + s < 1) {
        throw std::invalid_argument("interpolatory_coeffs: need r, s >= 0 and r + s >= 1");
    }
    if (r + s > 12) {
        throw std::overflow_error("interpolatory_coeffs: r + s > 12 loses factorial precision");
    }
    using detail::factorial;
    StencilOperator op;
    op.order = r + s;
    op.lo = -r;
    op.hi = s;
    op.alpha.assign(static_cast<std::size_t>(r + s + 1), 0.0);
    const double rs = factorial(r) * factorial(s);
    double sum = 0.0;
    for (int k = -r; k <= s; ++k) {
        if (k == 0) {
            continue;
        }
        const double sign = ((k + 1) % 2 == 0) ? 1.0 : -1.0;
        const double v = sign / k * rs / (factorial(r + k) * factorial(s - k));
        op.alpha[static_cast<std::size_t>(k + r)] = v;
        sum += v;
    }
    op.alpha[static_cast<std::size_t>(r)] = -sum;
    op.beta.assign(static_cast<std::size_t>(r + s), 0.0);
    double acc = 0.0;
    for (int k = s; k >= -r + 1; --k) {
        acc += op.alpha[static_cast<std::size_t>(k + r)];
        op.beta[static_cast<std::size_t>(k + r - 1)] = acc;
    }
    op.error_constant = ((s - 1) % 2 == 0 ? 1.0 : -1.0) * rs / factorial(r + s + 1);
    return op;
}

/// The four one-sided stencils used by the solver, by formal order.
inline StencilOperator named_operator(int order)
{
    switch (order) {
    case 1: return interpolatory_coeffs(1, 0);
    case 2: return interpolatory_coeffs(2, 0);
    case 3: return interpolatory_coeffs(2, 1);
    case 4: return interpolatory_coeffs(3, 1);
    default: throw std::invalid_argument("named_operator: order must be 1..4, got " + std::to_string(order));
    }
}

/// Single interface flux along `axis`: fhat_{i+1/2, j} for x, fhat_{i, j+1/2} for y.
/// For negative speed the stencil is mirrored: fhat_{i+1/2} = sum beta_k f_{i+1-k}.
inline double interface_flux(std::span<const double> plane, const Grid2D& g, Axis axis, int sign,
                             const StencilOperator& op, int i, int j)
{
    double acc = 0.0;
    for (int k = op.lo + 1; k <= op.hi; ++k) {
        const int shift = sign > 0 ? k : 1 - k;
        const std::size_t n = axis == Axis::x ? g.node(i + shift, j) : g.node(i, j + shift);
        acc += op.b(k) * plane[n];
    }
    return acc;
}

/// Interface fluxes of a whole plane. out[node(i,j)] holds fhat_{i+1/2,j} (x)
/// or fhat_{i,j+1/2} (y). `row` is scratch of at least nx + 2*reach entries.
inline void edge_fluxes(std::span<const double> plane, const Grid2D& g, Axis axis, int sign,
                        const StencilOperator& op, std::span<double> out, std::vector<double>& row)
{
    const int nx = g.nx();
    const int ny = g.ny();
    const int pad = op.reach();
    if (axis == Axis::x) {
        row.resize(static_cast<std::size_t>(nx + 2 * pad));
        for (int j = 0; j < ny; ++j) {
            const double* src = plane.data() + static_cast<std::size_t>(j) * nx;
            for (int i = -pad; i < nx + pad; ++i) {
                row[static_cast<std::size_t>(i + pad)] = src[wrap(i, nx)];
            }
            double* dst = out.data() + static_cast<std::size_t>(j) * nx;
            const double* r = row.data() + pad;
            for (int i = 0; i < nx; ++i) {
                dst[i] = 0.0;
            }
            for (int k = op.lo + 1; k <= op.hi; ++k) {
                const int shift = sign > 0 ? k : 1 - k;
                const double bk = op.b(k);
                for (int i = 0; i < nx; ++i) {
                    dst[i] += bk * r[i + shift];
                }
            }
        }
    } else {
        for (int j = 0; j < ny; ++j) {
            double* dst = out.data() + static_cast<std::size_t>(j) * nx;
            for (int i = 0; i < nx; ++i) {
                dst[i] = 0.0;
            }
            for (int k = op.lo + 1; k <= op.hi; ++k) {
                const int shift = sign > 0 ? k : 1 - k;
                const double bk = op.b(k);
                const double* src = plane.data() + static_cast<std::size_t>(wrap(j + shift, ny)) * nx;
                for (int i = 0; i < nx; ++i) {
                    dst[i] += bk * src[i];
                }
            }
        }
    }
}

/// out = delta f along `axis`, for a wave moving with the given speed sign:
/// sign * sum_k alpha_k f(i + sign*k), so that out ~ h * df/dx for either sign.
/// Zero speed gives the zero field.
inline Field apply_delta(const Field& f, Axis axis, int speed_sign, const StencilOperator& op)
{
    Field out(f.grid(), f.ncomp());
    if (speed_sign == 0) {
        return out;
    }
    const int sign = speed_sign > 0 ? 1 : -1;
    const Grid2D& g = f.grid();
    for (int c = 0; c < f.ncomp(); ++c) {
        const auto in = f.plane(c);
        auto dst = out.plane(c);
        for (int j = 0; j < g.ny(); ++j) {
            for (int i = 0; i < g.nx(); ++i) {
                double acc = 0.0;
                for (int k = op.lo; k <= op.hi; ++k) {
                    const std::size_t n =
                        axis == Axis::x ? g.node(i + sign * k, j) : g.node(i, j + sign * k);
                    acc += op.a(k) * in[n];
                }
                dst[g.node(i, j)] = sign * acc;
            }
        }
    }
    return out;
}

/// Corner residuals of quad [x_i, x_{i+1}] x [y_j, y_{j+1}], indexed
/// corner-major: 0 = (i,j), 1 = (i+1,j), 2 = (i+1,j+1), 3 = (i,j+1); each holds
/// one value per kinetic component.
struct QuadResiduals {
    std::array<std::vector<double>, 4> corner;
};

/// Splits the spatial update into per-quad, per-vertex residuals. The four
/// residuals a node receives from its adjacent quads add up to
/// dy*Lx*(fhat_{i+1/2} - fhat_{i-1/2}) + dx*Ly*(fhat_{j+1/2} - fhat_{j-1/2}),
/// and the four residuals of one quad add up to a flux balance through its
/// boundary that involves nodal values only.
///
/// `lamx`/`lamy` are the wave speeds; component c belongs to wave c / K.
inline QuadResiduals corner_residuals(const Field& f, std::span<const double> lamx,
                                      std::span<const double> lamy, int K, int qi, int qj,
                                      const StencilOperator& op)
{
    const Grid2D& g = f.grid();
    const double dx = g.dx();
    const double dy = g.dy();
    QuadResiduals res;
    for (auto& c : res.corner) {
        c.assign(static_cast<std::size_t>(f.ncomp()), 0.0);
    }
    auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
    for (int c = 0; c < f.ncomp(); ++c) {
        const int w = c / K;
        const double lx = lamx[static_cast<std::size_t>(w)];
        const double ly = lamy[static_cast<std::size_t>(w)];
        const auto p = f.plane(c);
        auto fx = [&](int i, int j) { return lx == 0.0 ? 0.0 : interface_flux(p, g, Axis::x, sgn(lx), op, i, j); };
        auto fy = [&](int i, int j) { return ly == 0.0 ? 0.0 : interface_flux(p, g, Axis::y, sgn(ly), op, i, j); };
        auto v = [&](int i, int j) { return p[g.node(i, j)]; };
        const int i = qi;
        const int j = qj;
        // x-part: a quad to the right of the node uses fhat_{+1/2} - f, to the left f - fhat_{-1/2}
        // y-part: a quad above the node uses fhat_{+1/2} - f, below f - fhat_{-1/2}
        const double xl = lx * dy;
        const double yl = ly * dx;
        res.corner[0][c] = 0.5 * (xl * (fx(i, j) - v(i, j)) + yl * (fy(i, j) - v(i, j)));
        res.corner[1][c] = 0.5 * (xl * (v(i + 1, j) - fx(i, j)) + yl * (fy(i + 1, j) - v(i + 1, j)));
        res.corner[2][c] =
            0.5 * (xl * (v(i + 1, j + 1) - fx(i, j + 1)) + yl * (v(i + 1, j + 1) - fy(i + 1, j)));
        res.corner[3][c] = 0.5 * (xl * (fx(i, j + 1) - v(i, j + 1)) + yl * (v(i, j + 1) - fy(i, j)));
    }
    return res;
}

} // namespace kdec
