#pragma once

#include "kdec/grid.hpp"
#include "kdec/kinetic.hpp"
#include "kdec/systems.hpp"
#include "kdec/transport.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace kdec {

/// Node flags and the derived quad flags. Quad (i, j) is the cell
/// [x_i, x_{i+1}] x [y_j, y_{j+1}] and is stored at index node(i, j).
struct MoodFlags {
    std::vector<std::uint8_t> node;
    std::vector<std::uint8_t> quad;

    [[nodiscard]] std::size_t node_count() const noexcept { return count(node); }
    [[nodiscard]] std::size_t quad_count() const noexcept { return count(quad); }
    [[nodiscard]] bool any() const noexcept { return node_count() > 0; }

private:
    static std::size_t count(const std::vector<std::uint8_t>& v) noexcept
    {
        std::size_t n = 0;
        for (auto b : v) {
            n += b != 0;
        }
        return n;
    }
};

/// Quad flags from node flags: a quad is flagged when any of its corners is.
inline void derive_quad_flags(const Grid2D& g, MoodFlags& flags)
{
    flags.quad.assign(g.nodes(), 0);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            flags.quad[g.node(i, j)] = flags.node[g.node(i, j)] | flags.node[g.node(i + 1, j)] |
                                       flags.node[g.node(i + 1, j + 1)] | flags.node[g.node(i, j + 1)];
        }
    }
}

/// Flags every node whose state is not admissible or whose primitive
/// variables are not all finite.
template <ConservationLaw Sys>
MoodFlags mood_detect(const Field& u, const Sys& sys)
{
    const Grid2D& g = u.grid();
    MoodFlags flags;
    flags.node.assign(g.nodes(), 0);
    for (std::size_t l = 0; l < g.nodes(); ++l) {
        const auto s = state_at<Sys>(u, l);
        bool bad = !sys.admissible(s);
        if (!bad) {
            for (double v : sys.to_primitive(s)) {
                bad = bad || v != v || !std::isfinite(v);
            }
        }
        flags.node[l] = bad ? 1 : 0;
    }
    derive_quad_flags(g, flags);
    return flags;
}

/// Adds the 8 neighbours of every flagged node.
inline void dilate(const Grid2D& g, MoodFlags& flags)
{
    const auto old = flags.node;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            if (!old[g.node(i, j)]) {
                continue;
            }
            for (int dj = -1; dj <= 1; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    flags.node[g.node(i + di, j + dj)] = 1;
                }
            }
        }
    }
    derive_quad_flags(g, flags);
}

/// First-order weight of each edge: the share of its two adjacent quads that
/// are flagged. Edge (i+1/2, j) lies between quads (i, j-1) and (i, j);
/// edge (i, j+1/2) between quads (i-1, j) and (i, j).
inline EdgeWeights mood_edge_weights(const Grid2D& g, const MoodFlags& flags)
{
    EdgeWeights w;
    w.wx.assign(g.nodes(), 0.0);
    w.wy.assign(g.nodes(), 0.0);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const std::size_t n = g.node(i, j);
            w.wx[n] = 0.5 * (flags.quad[n] + flags.quad[g.node(i, j - 1)]);
            w.wy[n] = 0.5 * (flags.quad[n] + flags.quad[g.node(i - 1, j)]);
        }
    }
    return w;
}

} // namespace kdec
