#include "kdec/fourier.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace kdec;

namespace {

constexpr double pi = std::numbers::pi;

// closed-form symbols
cplx closed_symbol(int k, double t)
{
    const cplx e1 = std::polar(1.0, -t);
    const cplx e2 = std::polar(1.0, -2 * t);
    const cplx e3 = std::polar(1.0, -3 * t);
    const cplx p1 = std::polar(1.0, t);
    switch (k) {
    case 1: return 1.0 - e1;
    case 2: return 1.5 - 2.0 * e1 + 0.5 * e2;
    case 3: return e2 / 6.0 - e1 + 0.5 + p1 / 3.0;
    default: return -e3 / 12.0 + 0.5 * e2 - 1.5 * e1 + 5.0 / 6.0 + 0.25 * p1;
    }
}

cplx random_g(std::mt19937_64& rng, double radius)
{
    std::uniform_real_distribution<double> d(-radius, radius);
    return {d(rng), d(rng)};
}

} // namespace

TEST(Fourier, SymbolsAreTheStencilTransforms)
{
    for (int k = 1; k <= 4; ++k) {
        for (int i = 0; i < 64; ++i) {
            const double t = 2 * pi * i / 64;
            EXPECT_NEAR(std::abs(symbol(k, t) - closed_symbol(k, t)), 0.0, 1e-14);
        }
        EXPECT_NEAR(std::abs(symbol(k, 0.0)), 0.0, 1e-15);
    }
    EXPECT_NEAR(std::abs(symbol(2, pi) - cplx{4.0, 0.0}), 0.0, 1e-14);
}

TEST(Fourier, RealPartNonNegative)
{
    for (int k = 1; k <= 4; ++k) {
        for (int i = 0; i < 4096; ++i) {
            EXPECT_GE(symbol(k, 2 * pi * i / 4096).real(), -1e-13);
        }
    }
}

TEST(Fourier, SymbolMaxima)
{
    // scan oracle; the maxima are 2, 4, 3/2, 8/3
    const double expect[] = {2.0, 4.0, 1.5, 8.0 / 3.0};
    for (int k = 1; k <= 4; ++k) {
        double m = 0.0;
        for (int i = 0; i < 4096; ++i) {
            m = std::max(m, std::abs(symbol(k, 2 * pi * i / 4096)));
        }
        EXPECT_NEAR(m, expect[k - 1], 1e-6) << k;
    }
}

TEST(Fourier, ExactAmplification)
{
    EXPECT_NEAR(std::abs(amp_exact(1, 0.0).v[0] - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(amp_exact(2, 0.0).v[0] - 1.0), 0.0, 1e-15);
    const auto a4 = amp_exact(4, 0.0);
    EXPECT_EQ(a4.size, 2);
    EXPECT_NEAR(std::abs(a4.v[0] - 1.0) + std::abs(a4.v[1] - 1.0), 0.0, 1e-15);
    for (double t = -20; t <= 20; t += 0.37) {
        EXPECT_NEAR(std::abs(amp_exact(2, cplx{0, t}).v[0]), 1.0, 1e-14);
    }
    std::mt19937_64 rng(4);
    for (int n = 0; n < 1000; ++n) {
        const cplx g = random_g(rng, 3.0);
        const bool stable = std::abs(amp_exact(1, g).v[0]) <= 1.0;
        EXPECT_EQ(stable, 2 * g.real() + std::norm(g) >= 0.0);
    }
    EXPECT_THROW(amp_exact(1, -1.0), std::domain_error);
    EXPECT_THROW(amp_exact(3, 0.0), std::invalid_argument);
}

TEST(Fourier, DecDifferenceIdentities)
{
    std::mt19937_64 rng(8);
    const double W[2][2] = {{1.0 / 3, -1.0 / 24}, {2.0 / 3, 1.0 / 6}};
    for (int n = 0; n < 100; ++n) {
        const cplx g = random_g(rng, 1.0);
        const cplx G1 = amp_exact(1, g).v[0];
        const cplx G2 = amp_exact(2, g).v[0];
        const auto G4 = amp_exact(4, g);
        for (int r = 0; r <= 6; ++r) {
            EXPECT_NEAR(std::abs(amp_dec(1, r + 1, g).v[0] - G1 - std::pow(-g, r + 1) * (1.0 - G1)), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(amp_dec(2, r + 1, g).v[0] - G2 - std::pow(-1.0, r + 1) * std::pow(g / 2.0, r + 1) * (1.0 - G2)),
                        0.0, 1e-12);
            // G_{4,r+1} - G4 = (-g)^{r+1} W^{r+1} (1 - G4)
            std::array<cplx, 2> v{1.0 - G4.v[0], 1.0 - G4.v[1]};
            for (int p = 0; p <= r; ++p) {
                v = {-g * (W[0][0] * v[0] + W[0][1] * v[1]), -g * (W[1][0] * v[0] + W[1][1] * v[1])};
            }
            const auto d = amp_dec(4, r + 1, g);
            EXPECT_NEAR(std::abs(d.v[0] - G4.v[0] - v[0]), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(d.v[1] - G4.v[1] - v[1]), 0.0, 1e-12);
        }
    }
    EXPECT_EQ(amp_dec(4, 0, 2.0).v[0], cplx(1.0));
}

TEST(Fourier, DecConvergesInsideContractionRadius)
{
    const double radius = 1.0 / ((337.0 + std::sqrt(104353.0)) / 1152.0);
    EXPECT_NEAR(radius, 1.745356304, 1e-8);
    std::mt19937_64 rng(12);
    for (int n = 0; n < 50; ++n) {
        cplx g = random_g(rng, 1.0);
        g *= 0.9 * radius / std::abs(g);
        const auto ex = amp_exact(4, g);
        double prev = 1e300;
        for (int r = 4; r <= 40; r += 4) {
            const auto d = amp_dec(4, r, g);
            const double e = std::abs(d.v[0] - ex.v[0]) + std::abs(d.v[1] - ex.v[1]);
            EXPECT_LE(e, prev + 1e-15);
            prev = e;
        }
        EXPECT_LE(prev, 1e-8);
    }
}

TEST(Fourier, OneDimensionalCflLimits)
{
    CflQuery q{2, 2, 2, 2};
    q.one_d = true;
    q.n_theta = 2048;
    EXPECT_NEAR(max_cfl(q), 0.5, 0.01);
    q = CflQuery{4, 4, 4, 5};
    q.one_d = true;
    q.n_theta = 2048;
    EXPECT_NEAR(max_cfl(q), 1.319, 0.01);
    q = CflQuery{1, 1, 1, 1};
    q.one_d = true;
    EXPECT_NEAR(max_cfl(q), 1.0, 0.01);
}

TEST(Fourier, CflStableUnderGridDoubling)
{
    CflQuery q{4, 4, 4, 5};
    q.n_theta = 128;
    const double a = max_cfl(q);
    q.n_theta = 256;
    const double b = max_cfl(q);
    EXPECT_LE(std::abs(a - b), 0.02 * b);
}

TEST(Fourier, RasterShape)
{
    const auto r = stability_raster(2, 3, -1, 1, -1, 1, 5);
    ASSERT_EQ(r.size(), 25u);
    EXPECT_EQ(r.front().re, -1.0);
    EXPECT_EQ(r.back().im, 1.0);
    EXPECT_NEAR(r[12].modulus, 1.0, 1e-15); // g = 0
}
