#pragma once

#include "kdec/quadrature.hpp"
#include "kdec/stencil.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdec {

using cplx = std::complex<double>;

/// Fourier symbol of the order-k difference: sum_m alpha_m e^{i m theta}.
inline cplx symbol(const StencilOperator& op, double theta)
{
    cplx s{0.0, 0.0};
    for (int m = op.lo; m <= op.hi; ++m) {
        s += op.a(m) * std::polar(1.0, m * theta);
    }
    return s;
}

inline cplx symbol(int k, double theta) { return symbol(named_operator(k), theta); }

/// Amplification vector: one entry for time orders 1 and 2, two for order 4.
struct Amplification {
    std::array<cplx, 2> v{};
    int size{1};

    [[nodiscard]] double modulus() const
    {
        double m = 0.0;
        for (int i = 0; i < size; ++i) {
            m = std::max(m, std::abs(v[static_cast<std::size_t>(i)]));
        }
        return m;
    }
};

namespace detail {

inline void check_time_order(int order)
{
    if (order != 1 && order != 2 && order != 4) {
        throw std::invalid_argument("amplification: time order must be 1, 2 or 4");
    }
}

inline void check_pole(cplx d)
{
    if (std::abs(d) < 1e-14) {
        throw std::domain_error("amplification: g is at a pole");
    }
}

} // namespace detail

/// Exact amplification of the underlying implicit quadrature for y' = -g y / dt.
inline Amplification amp_exact(int order, cplx g)
{
    detail::check_time_order(order);
    Amplification a;
    if (order == 1) {
        detail::check_pole(1.0 + g);
        a.v[0] = 1.0 / (1.0 + g);
    } else if (order == 2) {
        detail::check_pole(1.0 + 0.5 * g);
        a.v[0] = (1.0 - 0.5 * g) / (1.0 + 0.5 * g);
    } else {
        const cplx th = 12.0 + 6.0 * g + g * g;
        detail::check_pole(th);
        a.size = 2;
        a.v[0] = (24.0 - g * g) / (2.0 * th);
        a.v[1] = (12.0 - 6.0 * g + g * g) / th;
    }
    return a;
}

/// Amplification after r corrections of the explicit iteration
/// G_{r+1} = 1 - g w0 - g W G_r, starting from G_0 = 1.
inline Amplification amp_dec(int order, int r, cplx g)
{
    detail::check_time_order(order);
    if (r < 0) {
        throw std::invalid_argument("amp_dec: r must be >= 0");
    }
    const QuadratureTable q = QuadratureTable::for_order(order);
    Amplification a;
    a.size = q.stages;
    a.v = {cplx{1.0}, cplx{1.0}};
    for (int it = 0; it < r; ++it) {
        std::array<cplx, 2> next{};
        for (int p = 0; p < q.stages; ++p) {
            const auto ps = static_cast<std::size_t>(p);
            cplx acc = 1.0 - g * q.w0[ps];
            for (int k = 0; k < q.stages; ++k) {
                acc -= g * q.W[ps][static_cast<std::size_t>(k)] * a.v[static_cast<std::size_t>(k)];
            }
            next[ps] = acc;
        }
        a.v = next;
    }
    return a;
}

struct CflQuery {
    int time_order{4};
    int space_order_x{4};
    int space_order_y{4};
    int iterations{5};
    double tol{1e-10};
    int n_theta{1024};
    bool one_d{false}; // freeze theta_2 = 0
    double c_max{8.0};
    double resolution{1e-3};
};

namespace detail {

inline std::vector<cplx> symbol_table(int k, int n)
{
    const StencilOperator op = named_operator(k);
    std::vector<cplx> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        t[static_cast<std::size_t>(i)] = symbol(op, 2.0 * std::numbers::pi * i / n);
    }
    return t;
}

inline double max_modulus(const CflQuery& q, double c, const std::vector<cplx>& sx, const std::vector<cplx>& sy,
                          int stride)
{
    double m = 0.0;
    const int n = static_cast<int>(sx.size());
    const int ny = q.one_d ? 1 : n;
    for (int j = 0; j < ny; j += stride) {
        for (int i = 0; i < n; i += stride) {
            const cplx g = c * (sx[static_cast<std::size_t>(i)] + sy[static_cast<std::size_t>(j)]);
            m = std::max(m, amp_dec(q.time_order, q.iterations, g).modulus());
        }
    }
    return m;
}

} // namespace detail

/// Largest CFL number c such that every Fourier mode of
/// g = c (g_x(theta_1) + g_y(theta_2)) has amplification modulus <= 1 + tol.
/// The first unstable c is bracketed on a coarse scan, then bisected.
inline double max_cfl(const CflQuery& q)
{
    detail::check_time_order(q.time_order);
    if (q.iterations < 1 || q.n_theta < 8) {
        throw std::invalid_argument("max_cfl: need iterations >= 1 and n_theta >= 8");
    }
    const auto sx = detail::symbol_table(q.space_order_x, q.n_theta);
    const auto sy = detail::symbol_table(q.space_order_y, q.n_theta);
    const int coarse = q.one_d ? 1 : std::max(1, q.n_theta / 128);
    auto stable = [&](double c, int stride) { return detail::max_modulus(q, c, sx, sy, stride) <= 1.0 + q.tol; };

    const double step = 0.01;
    double lo = 0.0;
    double hi = q.c_max;
    for (double c = step; c <= q.c_max + 1e-12; c += step) {
        if (!stable(c, coarse)) {
            hi = c;
            break;
        }
        lo = c;
    }
    // the coarse grid may miss the worst mode: step back until the fine grid agrees
    while (lo > 0.0 && !stable(lo, 1)) {
        hi = lo;
        lo = std::max(0.0, lo - step);
    }
    while (hi - lo > q.resolution) {
        const double mid = 0.5 * (lo + hi);
        (stable(mid, 1) ? lo : hi) = mid;
    }
    return lo;
}

struct RasterPoint {
    double re;
    double im;
    double modulus;
};

/// |G| of the DeC iteration on a re x im raster of the g-plane.
inline std::vector<RasterPoint> stability_raster(int time_order, int iterations, double re0, double re1,
                                                 double im0, double im1, int n)
{
    if (n < 2) {
        throw std::invalid_argument("stability_raster: need n >= 2");
    }
    std::vector<RasterPoint> out;
    out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double im = im0 + (im1 - im0) * j / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double re = re0 + (re1 - re0) * i / (n - 1);
            out.push_back({re, im, amp_dec(time_order, iterations, cplx{re, im}).modulus()});
        }
    }
    return out;
}

} // namespace kdec
