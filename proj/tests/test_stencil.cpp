#include "kdec/stencil.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace kdec;

namespace {

void expect_alpha(const StencilOperator& op, int lo, std::initializer_list<double> vals)
{
    ASSERT_EQ(op.lo, lo);
    ASSERT_EQ(op.width(), static_cast<int>(vals.size()));
    int k = lo;
    for (double v : vals) {
        EXPECT_NEAR(op.a(k), v, 1e-15) << "offset " << k;
        ++k;
    }
}

// Truncation error coefficient from Taylor moments: sum alpha_k k^{q+1} / (q+1)!
double moment_error_constant(const StencilOperator& op)
{
    const int q = op.order;
    double s = 0.0;
    for (int k = op.lo; k <= op.hi; ++k) {
        s += op.a(k) * std::pow(k, q + 1);
    }
    double f = 1.0;
    for (int i = 2; i <= q + 1; ++i) {
        f *= i;
    }
    return s / f;
}

Field random_field(const Grid2D& g, int nc, unsigned seed)
{
    Field f(g, nc);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1, 1);
    for (auto& v : f.data()) {
        v = d(rng);
    }
    return f;
}

} // namespace

TEST(Stencil, NamedStencils)
{
    expect_alpha(interpolatory_coeffs(1, 0), -1, {-1.0, 1.0});
    expect_alpha(interpolatory_coeffs(2, 0), -2, {0.5, -2.0, 1.5});
    expect_alpha(interpolatory_coeffs(2, 1), -2, {1.0 / 6, -1.0, 0.5, 1.0 / 3});
    expect_alpha(interpolatory_coeffs(3, 1), -3, {-1.0 / 12, 0.5, -1.5, 5.0 / 6, 0.25});
}

TEST(Stencil, NamedFluxForms)
{
    const auto o1 = named_operator(1);
    EXPECT_EQ(o1.lo + 1, 0);
    EXPECT_NEAR(o1.b(0), 1.0, 1e-15);
    const auto o3 = named_operator(3);
    EXPECT_NEAR(o3.b(-1), -1.0 / 6, 1e-15);
    EXPECT_NEAR(o3.b(0), 5.0 / 6, 1e-15);
    EXPECT_NEAR(o3.b(1), 1.0 / 3, 1e-15);
    const auto o4 = named_operator(4);
    EXPECT_NEAR(o4.b(-2), 1.0 / 12, 1e-15);
    EXPECT_NEAR(o4.b(-1), -5.0 / 12, 1e-15);
    EXPECT_NEAR(o4.b(0), 13.0 / 12, 1e-15);
    EXPECT_NEAR(o4.b(1), 0.25, 1e-15);
    EXPECT_THROW(named_operator(5), std::invalid_argument);
}

TEST(Stencil, InvariantsForManyMethods)
{
    for (int r = 0; r <= 5; ++r) {
        for (int s = 0; s <= 5; ++s) {
            if (r + s < 1) {
                continue;
            }
            const auto op = interpolatory_coeffs(r, s);
            double sum = 0.0;
            for (int k = op.lo; k <= op.hi; ++k) {
                sum += op.a(k);
            }
            EXPECT_NEAR(sum, 0.0, 1e-13);
            for (int m = 1; m <= op.order; ++m) {
                double mom = 0.0;
                for (int k = op.lo; k <= op.hi; ++k) {
                    mom += op.a(k) * std::pow(k, m);
                }
                EXPECT_NEAR(mom, m == 1 ? 1.0 : 0.0, 1e-11) << r << "," << s << " m=" << m;
            }
            // alpha_k = beta_k - beta_{k+1}
            for (int k = op.lo; k <= op.hi; ++k) {
                const double bk = k > op.lo ? op.b(k) : 0.0;
                const double bk1 = k + 1 <= op.hi ? op.b(k + 1) : 0.0;
                EXPECT_NEAR(op.a(k), bk - bk1, 1e-13);
            }
            EXPECT_NEAR(op.error_constant, moment_error_constant(op), 1e-12) << r << "," << s;
        }
    }
    EXPECT_THROW(interpolatory_coeffs(0, 0), std::invalid_argument);
    EXPECT_THROW(interpolatory_coeffs(-1, 2), std::invalid_argument);
    EXPECT_THROW(interpolatory_coeffs(7, 6), std::overflow_error);
}

TEST(Stencil, FluxFormEquivalence)
{
    const Grid2D g(16, 12, 0, 1, 0, 1);
    const Field f = random_field(g, 1, 5);
    std::vector<double> flux(g.nodes()), row;
    for (int q = 1; q <= 4; ++q) {
        const auto op = named_operator(q);
        for (Axis ax : {Axis::x, Axis::y}) {
            for (int sgn : {1, -1}) {
                const Field d = apply_delta(f, ax, sgn, op);
                edge_fluxes(f.plane(0), g, ax, sgn, op, flux, row);
                for (int j = 0; j < g.ny(); ++j) {
                    for (int i = 0; i < g.nx(); ++i) {
                        const std::size_t back = ax == Axis::x ? g.node(i - 1, j) : g.node(i, j - 1);
                        const double ff = flux[g.node(i, j)] - flux[back];
                        EXPECT_NEAR(d(i, j, 0), ff, 1e-13);
                        EXPECT_EQ(flux[g.node(i, j)], interface_flux(f.plane(0), g, ax, sgn, op, i, j));
                    }
                }
                EXPECT_NEAR(d.sum(0), 0.0, 1e-12);
            }
        }
    }
}

TEST(Stencil, MirrorAndZeroSpeed)
{
    const Grid2D g(8, 8, 0, 1, 0, 1);
    const Field f = random_field(g, 1, 9);
    const Field d = apply_delta(f, Axis::x, -1, named_operator(1));
    for (int i = 0; i < 8; ++i) {
        EXPECT_DOUBLE_EQ(d(i, 2, 0), f(i + 1, 2, 0) - f(i, 2, 0));
    }
    const Field z = apply_delta(f, Axis::y, 0, named_operator(4));
    for (double v : z.data()) {
        EXPECT_EQ(v, 0.0);
    }
    Field c(g, 1);
    c.fill(3.0);
    for (int q = 1; q <= 4; ++q) {
        const Field dc = apply_delta(c, Axis::y, 1, named_operator(q));
        for (double v : dc.data()) {
            EXPECT_NEAR(v, 0.0, 1e-14);
        }
    }
}

TEST(Stencil, PolynomialExactness)
{
    for (int q = 1; q <= 4; ++q) {
        const auto op = named_operator(q);
        for (int m = 0; m <= q; ++m) {
            // delta of x^m at x = 0 on unit spacing, both directions
            for (int sgn : {1, -1}) {
                double acc = 0.0;
                for (int k = op.lo; k <= op.hi; ++k) {
                    acc += op.a(k) * std::pow(sgn * k, m);
                }
                EXPECT_NEAR(sgn * acc, m == 1 ? 1.0 : 0.0, 1e-13);
            }
        }
    }
}

TEST(Stencil, TruncationOrderOnSineData)
{
    for (int q = 1; q <= 4; ++q) {
        const auto op = named_operator(q);
        for (int sgn : {1, -1}) {
            std::vector<double> err;
            for (int n : {16, 32, 64, 128}) {
                const Grid2D g(n, n, -1, 1, -1, 1);
                Field f(g, 1);
                for (int j = 0; j < n; ++j) {
                    for (int i = 0; i < n; ++i) {
                        f(i, j, 0) = std::sin(std::numbers::pi * (g.x(i) + g.y(j)));
                    }
                }
                const Field d = apply_delta(f, Axis::x, sgn, op);
                double e = 0.0;
                for (int j = 0; j < n; ++j) {
                    for (int i = 0; i < n; ++i) {
                        const double exact = std::numbers::pi * std::cos(std::numbers::pi * (g.x(i) + g.y(j)));
                        e = std::max(e, std::abs(d(i, j, 0) / g.dx() - exact));
                    }
                }
                err.push_back(e);
            }
            for (std::size_t l = 1; l < err.size(); ++l) {
                EXPECT_NEAR(std::log2(err[l - 1] / err[l]), q, 0.25) << "order " << q;
            }
        }
    }
}

TEST(Stencil, CornerResidualIdentities)
{
    const Grid2D g(10, 9, 0, 1.0, 0, 0.9 * 1.3);
    const int K = 2;
    const std::vector<double> lamx{0.0, -1.5, 0.0, 1.5, 0.7};
    const std::vector<double> lamy{1.5, 0.0, -1.5, 0.0, -0.4};
    const Field f = random_field(g, 5 * K, 21);
    for (int q = 1; q <= 4; ++q) {
        const auto op = named_operator(q);
        std::vector<std::vector<double>> node_sum(g.nodes(), std::vector<double>(f.ncomp(), 0.0));
        for (int j = 0; j < g.ny(); ++j) {
            for (int i = 0; i < g.nx(); ++i) {
                const auto r = corner_residuals(f, lamx, lamy, K, i, j, op);
                const int ci[4] = {i, i + 1, i + 1, i};
                const int cj[4] = {j, j, j + 1, j + 1};
                for (int c = 0; c < 4; ++c) {
                    for (int m = 0; m < f.ncomp(); ++m) {
                        node_sum[g.node(ci[c], cj[c])][m] += r.corner[c][m];
                    }
                }
                // quad sum: boundary flux balance with nodal values only
                for (int m = 0; m < f.ncomp(); ++m) {
                    const double lx = lamx[m / K], ly = lamy[m / K];
                    auto v = [&](int a, int b) { return f(a, b, m); };
                    const double expect = 0.5 * g.dy() * lx * (v(i + 1, j) + v(i + 1, j + 1) - v(i, j) - v(i, j + 1)) +
                                          0.5 * g.dx() * ly * (v(i, j + 1) + v(i + 1, j + 1) - v(i, j) - v(i + 1, j));
                    const double got = r.corner[0][m] + r.corner[1][m] + r.corner[2][m] + r.corner[3][m];
                    EXPECT_NEAR(got, expect, 1e-13);
                }
            }
        }
        for (int m = 0; m < f.ncomp(); ++m) {
            const double lx = lamx[m / K], ly = lamy[m / K];
            const int sx = (lx > 0) - (lx < 0), sy = (ly > 0) - (ly < 0);
            for (int j = 0; j < g.ny(); ++j) {
                for (int i = 0; i < g.nx(); ++i) {
                    auto p = f.plane(m);
                    double expect = 0.0;
                    if (sx != 0) {
                        expect += g.dy() * lx *
                                  (interface_flux(p, g, Axis::x, sx, op, i, j) - interface_flux(p, g, Axis::x, sx, op, i - 1, j));
                    }
                    if (sy != 0) {
                        expect += g.dx() * ly *
                                  (interface_flux(p, g, Axis::y, sy, op, i, j) - interface_flux(p, g, Axis::y, sy, op, i, j - 1));
                    }
                    EXPECT_NEAR(node_sum[g.node(i, j)][m], expect, 1e-13);
                }
            }
        }
    }
    Field c(g, 2);
    c.fill(2.0);
    const auto r = corner_residuals(c, std::vector<double>{1.0}, std::vector<double>{-1.0}, 2, 3, 3, named_operator(4));
    for (const auto& cr : r.corner) {
        for (double v : cr) {
            EXPECT_NEAR(v, 0.0, 1e-14);
        }
    }
}
