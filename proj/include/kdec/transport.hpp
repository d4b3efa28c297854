#pragma once

#include "kdec/grid.hpp"
#include "kdec/limiter.hpp"
#include "kdec/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace kdec {

/// Per-edge weights of the first-order flux: wx[node(i,j)] belongs to edge
/// (i+1/2, j), wy[node(i,j)] to edge (i, j+1/2).
struct EdgeWeights {
    std::vector<double> wx;
    std::vector<double> wy;
};

/// How interface fluxes are formed.
///  - high: the high-order flux everywhere.
///  - limited: first-order flux plus a limited share of the high-order correction.
///  - mixed: (1 - w) high + w low on edges with w > 0; edges with w == 0 take
///    the high-order flux of the `frozen` field instead of the current one.
struct FluxMode {
    enum class Kind { high, limited, mixed };
    Kind kind{Kind::high};
    const LimiterParams* limiter{nullptr};
    const EdgeWeights* weights{nullptr};
    const Field* frozen{nullptr};
};

/// Spatial operator of the kinetic system:
/// D f = Lx delta_x f / dx + Ly delta_y f / dy, per kinetic component.
class Transport {
public:
    Transport(const Grid2D& grid, StencilOperator high, StencilOperator low, int K)
        : grid_(grid), high_(std::move(high)), low_(std::move(low)), K_(K)
    {
    }

    [[nodiscard]] const StencilOperator& high() const noexcept { return high_; }
    [[nodiscard]] const StencilOperator& low() const noexcept { return low_; }

    void apply(const Field& f, Field& out, std::span<const double> lamx, std::span<const double> lamy,
               const FluxMode& mode) const
    {
        const int nc = f.ncomp();
#ifdef _OPENMP
#pragma omp parallel
#endif
        {
            Scratch s;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
            for (int c = 0; c < nc; ++c) {
                const int w = c / K_;
                auto dst = out.plane(c);
                std::fill(dst.begin(), dst.end(), 0.0);
                const double lx = lamx[static_cast<std::size_t>(w)];
                const double ly = lamy[static_cast<std::size_t>(w)];
                if (lx != 0.0) {
                    axis_term(f, c, Axis::x, lx, mode, dst, s);
                }
                if (ly != 0.0) {
                    axis_term(f, c, Axis::y, ly, mode, dst, s);
                }
            }
        }
    }

private:
    struct Scratch {
        std::vector<double> fh, fl, fz, theta, row;
    };

    void fluxes(std::span<const double> plane, Axis axis, int sign, const StencilOperator& op,
                std::vector<double>& out, std::vector<double>& row) const
    {
        out.resize(grid_.nodes());
        edge_fluxes(plane, grid_, axis, sign, op, out, row);
    }

    // node-centred difference of an edge-flux array along the axis
    [[nodiscard]] std::size_t behind(Axis axis, int i, int j) const noexcept
    {
        return axis == Axis::x ? grid_.node(i - 1, j) : grid_.node(i, j - 1);
    }
    [[nodiscard]] std::size_t ahead(Axis axis, int i, int j) const noexcept
    {
        return axis == Axis::x ? grid_.node(i + 1, j) : grid_.node(i, j + 1);
    }

    void axis_term(const Field& f, int c, Axis axis, double speed, const FluxMode& mode,
                   std::span<double> dst, Scratch& s) const
    {
        const int sign = speed > 0.0 ? 1 : -1;
        const auto plane = f.plane(c);
        const int nx = grid_.nx();
        const int ny = grid_.ny();

        switch (mode.kind) {
        case FluxMode::Kind::high:
            fluxes(plane, axis, sign, high_, s.fh, s.row);
            break;
        case FluxMode::Kind::limited: {
            fluxes(plane, axis, sign, high_, s.fh, s.row);
            fluxes(plane, axis, sign, low_, s.fl, s.row);
            double scale = 0.0;
            for (double v : plane) {
                scale = std::max(scale, std::abs(v));
            }
            s.theta.resize(grid_.nodes());
            for (int j = 0; j < ny; ++j) {
                for (int i = 0; i < nx; ++i) {
                    const std::size_t n = grid_.node(i, j);
                    const std::size_t b = behind(axis, i, j);
                    const double d1 = s.fl[n] - s.fl[b];
                    const double dh = s.fh[n] - s.fh[b];
                    s.theta[n] = limiter_weight(d1, dh, *mode.limiter, scale);
                }
            }
            for (int j = 0; j < ny; ++j) {
                for (int i = 0; i < nx; ++i) {
                    const std::size_t n = grid_.node(i, j);
                    const double th = std::min(s.theta[n], s.theta[ahead(axis, i, j)]);
                    if (th != 1.0) {
                        s.fh[n] = s.fl[n] + th * (s.fh[n] - s.fl[n]);
                    }
                }
            }
            break;
        }
        case FluxMode::Kind::mixed: {
            fluxes(plane, axis, sign, high_, s.fh, s.row);
            fluxes(plane, axis, sign, low_, s.fl, s.row);
            fluxes(mode.frozen->plane(c), axis, sign, high_, s.fz, s.row);
            const auto& wt = axis == Axis::x ? mode.weights->wx : mode.weights->wy;
            for (std::size_t n = 0; n < grid_.nodes(); ++n) {
                const double w = wt[n];
                if (w == 0.0) {
                    s.fh[n] = s.fz[n];
                } else if (w == 1.0) {
                    s.fh[n] = s.fl[n];
                } else {
                    s.fh[n] = (1.0 - w) * s.fh[n] + w * s.fl[n];
                }
            }
            break;
        }
        }

        const double scale = speed / (axis == Axis::x ? grid_.dx() : grid_.dy());
        const double* fl = s.fh.data();
        if (axis == Axis::x) {
            for (int j = 0; j < ny; ++j) {
                const double* r = fl + static_cast<std::size_t>(j) * nx;
                double* d = dst.data() + static_cast<std::size_t>(j) * nx;
                d[0] += scale * (r[0] - r[nx - 1]);
                for (int i = 1; i < nx; ++i) {
                    d[i] += scale * (r[i] - r[i - 1]);
                }
            }
        } else {
            for (int j = 0; j < ny; ++j) {
                const double* r = fl + static_cast<std::size_t>(j) * nx;
                const double* rb = fl + static_cast<std::size_t>(wrap(j - 1, ny)) * nx;
                double* d = dst.data() + static_cast<std::size_t>(j) * nx;
                for (int i = 0; i < nx; ++i) {
                    d[i] += scale * (r[i] - rb[i]);
                }
            }
        }
    }

    Grid2D grid_;
    StencilOperator high_;
    StencilOperator low_;
    int K_;
};

} // namespace kdec
