#include "kdec/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace kdec;

TEST(Grid, SpacingAndCoordinates)
{
    const Grid2D g(80, 40, -2.0, 2.0, -1.0, 1.0);
    EXPECT_DOUBLE_EQ(g.dx(), 0.05);
    EXPECT_DOUBLE_EQ(g.dy(), 0.05);
    EXPECT_DOUBLE_EQ(g.x(0), -2.0);
    EXPECT_DOUBLE_EQ(g.y(39), 1.0 - 0.05);
    EXPECT_EQ(g.nodes(), 3200u);
    EXPECT_DOUBLE_EQ(g.area(), 8.0);
}

TEST(Grid, PeriodicWrap)
{
    const Grid2D g(8, 10, 0.0, 1.0, 0.0, 1.0);
    EXPECT_EQ(g.node(-1, 0), g.node(7, 0));
    EXPECT_EQ(g.node(8, 0), g.node(0, 0));
    EXPECT_EQ(g.node(3, -1), g.node(3, 9));
    EXPECT_EQ(g.node(3, 10), g.node(3, 0));
    EXPECT_EQ(g.node(2, 1), 8u + 2u);
    EXPECT_EQ(wrap(-17, 8), 7);
}

TEST(Grid, RejectsDegenerateInput)
{
    EXPECT_THROW(Grid2D(4, 8, 0, 1, 0, 1), std::invalid_argument);
    EXPECT_THROW(Grid2D(8, 8, 1, 1, 0, 1), std::invalid_argument);
    EXPECT_THROW(Field(Grid2D(8, 8, 0, 1, 0, 1), 0), std::invalid_argument);
}

TEST(Field, ComponentMajorLayout)
{
    const Grid2D g(8, 8, 0, 1, 0, 1);
    Field f(g, 3);
    f(2, 3, 1) = 5.0;
    EXPECT_EQ(f.plane(1)[g.node(2, 3)], 5.0);
    EXPECT_EQ(f.data()[g.nodes() + g.node(2, 3)], 5.0);
    EXPECT_EQ(f.sum(1), 5.0);
    EXPECT_TRUE(f.all_finite());
    f(0, 0, 2) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_FALSE(f.all_finite());
}

TEST(Norms, AreaWeighted)
{
    const Grid2D g(8, 8, 0, 2, 0, 2);
    Field e(g, 1);
    e.fill(0.5);
    e(1, 1, 0) = -2.0;
    const Norms n = discrete_norms(e);
    const double cell = 0.25 * 0.25;
    EXPECT_NEAR(n.l1, cell * (63 * 0.5 + 2.0), 1e-15);
    EXPECT_NEAR(n.l2, std::sqrt(cell * (63 * 0.25 + 4.0)), 1e-15);
    EXPECT_EQ(n.linf, 2.0);
    e(0, 0, 0) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(discrete_norms(e), std::domain_error);
    EXPECT_THROW(discrete_norms(e, 1), std::out_of_range);
}
