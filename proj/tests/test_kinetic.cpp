#include "kdec/kinetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace kdec;

namespace {

Euler::State random_euler(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> pos(0.05, 5.0), vel(-3.0, 3.0);
    return Euler().from_primitive({pos(rng), vel(rng), vel(rng), pos(rng)});
}

} // namespace

TEST(Kinetic, FourWaveVelocities)
{
    const auto m = four_wave_model(advection_system(), 2.0);
    ASSERT_EQ(m.waves(), 4);
    // (0, l), (-l, 0), (0, -l), (l, 0)
    EXPECT_EQ(m.lamx(0), 0.0);
    EXPECT_EQ(m.lamy(0), 2.0);
    EXPECT_EQ(m.lamx(1), -2.0);
    EXPECT_EQ(m.lamy(1), 0.0);
    EXPECT_EQ(m.lamx(3), 2.0);
    EXPECT_EQ(m.lamy(2), -2.0);
}

TEST(Kinetic, FourWaveMaxwellianClosedForm)
{
    const double l = 3.0;
    const auto m = four_wave_model(euler_system(), l);
    std::mt19937_64 rng(3);
    const auto u = random_euler(rng);
    const auto a1 = Euler().flux1(u);
    const auto a2 = Euler().flux2(u);
    const auto M = m.maxwellian(u);
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(M[0 * 4 + k], u[k] / 4 + a2[k] / (2 * l), 1e-13 * (1 + std::abs(u[k]) + std::abs(a2[k])));
        EXPECT_NEAR(M[1 * 4 + k], u[k] / 4 - a1[k] / (2 * l), 1e-13 * (1 + std::abs(u[k]) + std::abs(a1[k])));
    }
}

TEST(Kinetic, GeneralFamilyNormalization)
{
    // sum_i lamx_i^2 = lambda^2 (J+1)(2J+1) N' / (3J)
    for (int J = 1; J <= 3; ++J) {
        for (int Np = 1; Np <= 3; ++Np) {
            const double l = 1.7;
            const auto m = general_model(advection_system(), J, Np, l);
            EXPECT_EQ(m.waves(), 4 * Np * J);
            double sx = 0.0, sy = 0.0, sxy = 0.0, sxx = 0.0;
            for (int i = 0; i < m.waves(); ++i) {
                sx += m.lamx(i);
                sy += m.lamy(i);
                sxy += m.lamx(i) * m.lamy(i);
                sxx += m.lamx(i) * m.lamx(i);
            }
            EXPECT_NEAR(sx, 0.0, 1e-12);
            EXPECT_NEAR(sy, 0.0, 1e-12);
            EXPECT_NEAR(sxy, 0.0, 1e-12);
            EXPECT_NEAR(sxx, l * l * (J + 1) * (2 * J + 1) * Np / (3.0 * J), 1e-11);
        }
    }
}

TEST(Kinetic, ConsistencyOnRandomStates)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> any(-5.0, 5.0);
    for (auto fam : {WaveFamily::four_wave(), WaveFamily::general(1, 2), WaveFamily::general(2, 1),
                     WaveFamily::general(2, 2)}) {
        const KineticModel<Euler> me(euler_system(), fam, 4.0);
        const KineticModel<Advection> ma(advection_system(), fam, 2.5);
        for (int n = 0; n < 100; ++n) {
            EXPECT_LE(consistency_residual(me, random_euler(rng)).max(), 1e-12);
            EXPECT_LE(consistency_residual(ma, Advection::State{any(rng)}).max(), 1e-12);
        }
    }
}

TEST(Kinetic, MonotoneSpeedFactor)
{
    EXPECT_NEAR(four_wave_model(advection_system(), 1.0).monotone_speed_factor(), 2.0, 1e-14);
    EXPECT_NEAR(general_model(advection_system(), 1, 2, 1.0).monotone_speed_factor(), 2 * std::numbers::sqrt2,
                1e-13);
}

TEST(Kinetic, ProjectionIsLinearAndInvertsEquilibrium)
{
    const Grid2D g(8, 8, 0, 1, 0, 1);
    const auto m = four_wave_model(euler_system(), 5.0);
    std::mt19937_64 rng(11);
    Field u(g, 4);
    for (std::size_t l = 0; l < g.nodes(); ++l) {
        const auto s = random_euler(rng);
        for (int k = 0; k < 4; ++k) {
            u.plane(k)[l] = s[k];
        }
    }
    const Field f = equilibrium(m, u);
    const Field pu = project(f, 4);
    for (std::size_t e = 0; e < u.size(); ++e) {
        EXPECT_NEAR(pu.data()[e], u.data()[e], 1e-13 * (1 + std::abs(u.data()[e])));
    }
    Field a(g, 16), b(g, 16), c(g, 16);
    std::uniform_real_distribution<double> d(-1, 1);
    for (std::size_t e = 0; e < a.size(); ++e) {
        a.data()[e] = d(rng);
        b.data()[e] = d(rng);
        c.data()[e] = 2.0 * a.data()[e] - 3.0 * b.data()[e];
    }
    const Field pa = project(a, 4), pb = project(b, 4), pc = project(c, 4);
    for (std::size_t e = 0; e < pa.size(); ++e) {
        EXPECT_NEAR(pc.data()[e], 2.0 * pa.data()[e] - 3.0 * pb.data()[e], 1e-14);
    }
    EXPECT_THROW(project(a, 3), std::invalid_argument);
}

TEST(Kinetic, SubcharacteristicLambda)
{
    const Grid2D g(8, 8, 0, 1, 0, 1);
    Field u(g, 4);
    const Euler e;
    for (std::size_t l = 0; l < g.nodes(); ++l) {
        const auto s = e.from_primitive({1.0, l == 5 ? -3.0 : 0.0, 0.0, 1.0});
        for (int k = 0; k < 4; ++k) {
            u.plane(k)[l] = s[k];
        }
    }
    EXPECT_NEAR(subcharacteristic_lambda(e, u, 1.05), 1.05 * (3.0 + std::sqrt(1.4)), 1e-13);
    EXPECT_THROW(subcharacteristic_lambda(e, u, 0.9), std::invalid_argument);
    EXPECT_THROW(four_wave_model(e, 0.0), std::invalid_argument);
}
