#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdec {

/// Periodic index wrap into [0, n).
constexpr int wrap(int i, int n) noexcept
{
    const int r = i % n;
    return r < 0 ? r + n : r;
}

/// Uniform node-centred periodic Cartesian grid.
///
/// Node (i, j) sits at (x0 + i*dx, y0 + j*dy); the node at x1 is the periodic
/// image of the node at x0 and is not stored.
class Grid2D {
public:
    static constexpr int kMinNodes = 8;

    Grid2D(int nx, int ny, double x0, double x1, double y0, double y1)
        : nx_(nx), ny_(ny), x0_(x0), x1_(x1), y0_(y0), y1_(y1)
    {
        if (nx < kMinNodes || ny < kMinNodes) {
            throw std::invalid_argument("Grid2D: need at least " + std::to_string(kMinNodes) +
                                        " nodes per axis, got " + std::to_string(nx) + "x" +
                                        std::to_string(ny));
        }
        if (!(x1 > x0) || !(y1 > y0)) {
            throw std::invalid_argument("Grid2D: empty domain");
        }
        dx_ = (x1 - x0) / nx;
        dy_ = (y1 - y0) / ny;
    }

    [[nodiscard]] int nx() const noexcept { return nx_; }
    [[nodiscard]] int ny() const noexcept { return ny_; }
    [[nodiscard]] double dx() const noexcept { return dx_; }
    [[nodiscard]] double dy() const noexcept { return dy_; }
    [[nodiscard]] double x0() const noexcept { return x0_; }
    [[nodiscard]] double x1() const noexcept { return x1_; }
    [[nodiscard]] double y0() const noexcept { return y0_; }
    [[nodiscard]] double y1() const noexcept { return y1_; }
    [[nodiscard]] double x(int i) const noexcept { return x0_ + i * dx_; }
    [[nodiscard]] double y(int j) const noexcept { return y0_ + j * dy_; }
    [[nodiscard]] double area() const noexcept { return (x1_ - x0_) * (y1_ - y0_); }
    [[nodiscard]] std::size_t nodes() const noexcept
    {
        return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
    }
    [[nodiscard]] std::size_t node(int i, int j) const noexcept
    {
        return static_cast<std::size_t>(wrap(j, ny_)) * nx_ + static_cast<std::size_t>(wrap(i, nx_));
    }

    friend bool operator==(const Grid2D&, const Grid2D&) = default;

private:
    int nx_;
    int ny_;
    double x0_, x1_, y0_, y1_;
    double dx_{}, dy_{};
};

/// Multi-component nodal field. Storage is component-major: one contiguous
/// nx*ny plane per component, rows of constant j inside a plane.
class Field {
public:
    Field(const Grid2D& grid, int ncomp) : grid_(grid), ncomp_(ncomp)
    {
        if (ncomp < 1) {
            throw std::invalid_argument("Field: ncomp must be positive");
        }
        data_.assign(grid.nodes() * static_cast<std::size_t>(ncomp), 0.0);
    }

    [[nodiscard]] const Grid2D& grid() const noexcept { return grid_; }
    [[nodiscard]] int ncomp() const noexcept { return ncomp_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    [[nodiscard]] double& operator()(int i, int j, int c) noexcept
    {
        return data_[plane_offset(c) + grid_.node(i, j)];
    }
    [[nodiscard]] double operator()(int i, int j, int c) const noexcept
    {
        return data_[plane_offset(c) + grid_.node(i, j)];
    }

    [[nodiscard]] std::span<double> plane(int c) noexcept
    {
        return {data_.data() + plane_offset(c), grid_.nodes()};
    }
    [[nodiscard]] std::span<const double> plane(int c) const noexcept
    {
        return {data_.data() + plane_offset(c), grid_.nodes()};
    }

    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    [[nodiscard]] bool all_finite() const noexcept
    {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
    }

    /// Sum over nodes of one component (no area weight).
    [[nodiscard]] double sum(int c) const noexcept
    {
        double s = 0.0;
        for (double v : plane(c)) {
            s += v;
        }
        return s;
    }

private:
    [[nodiscard]] std::size_t plane_offset(int c) const noexcept
    {
        return static_cast<std::size_t>(c) * grid_.nodes();
    }

    Grid2D grid_;
    int ncomp_;
    std::vector<double> data_;
};

struct Norms {
    double l1{0.0};
    double l2{0.0};
    double linf{0.0};
};

/// Area-weighted discrete norms of one component.
inline Norms discrete_norms(const Field& err, int comp = 0)
{
    if (comp < 0 || comp >= err.ncomp()) {
        throw std::out_of_range("discrete_norms: component out of range");
    }
    const double cell = err.grid().dx() * err.grid().dy();
    Norms n;
    double sq = 0.0;
    for (double e : err.plane(comp)) {
        if (!std::isfinite(e)) {
            throw std::domain_error("discrete_norms: non-finite entry");
        }
        const double a = std::abs(e);
        n.l1 += a;
        sq += a * a;
        n.linf = std::max(n.linf, a);
    }
    n.l1 *= cell;
    n.l2 = std::sqrt(sq * cell);
    return n;
}

} // namespace kdec
