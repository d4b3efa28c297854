#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kdec {

/// Sub-step quadrature on [t_n, t_n + dt]: node fractions beta_p (p = 1..M),
/// weights W (M x M) for the sub-nodes and w0 for t_n itself, so that
/// int_{t_n}^{t_n + beta_p dt} phi ~ dt (w0_p phi(t_n) + sum_q W_pq phi(t_q)).
/// Only M <= 2 occurs (orders 1, 2 and 4).
struct QuadratureTable {
    static constexpr int kMaxStages = 2;

    int order{1};
    int stages{1};
    std::array<double, kMaxStages> beta{};
    std::array<std::array<double, kMaxStages>, kMaxStages> W{};
    std::array<double, kMaxStages> w0{};

    static QuadratureTable for_order(int order)
    {
        QuadratureTable q;
        q.order = order;
        switch (order) {
        case 1: // implicit Euler
            q.stages = 1;
            q.beta = {1.0, 0.0};
            q.W[0] = {1.0, 0.0};
            q.w0 = {0.0, 0.0};
            break;
        case 2: // trapezoidal
            q.stages = 1;
            q.beta = {1.0, 0.0};
            q.W[0] = {0.5, 0.0};
            q.w0 = {0.5, 0.0};
            break;
        case 4: // Lobatto IIIA on {0, 1/2, 1}
            q.stages = 2;
            q.beta = {0.5, 1.0};
            q.W[0] = {1.0 / 3.0, -1.0 / 24.0};
            q.W[1] = {2.0 / 3.0, 1.0 / 6.0};
            q.w0 = {5.0 / 24.0, 1.0 / 6.0};
            break;
        default:
            throw std::invalid_argument("QuadratureTable: time order must be 1, 2 or 4, got " +
                                        std::to_string(order));
        }
        return q;
    }
};

using Mat2 = std::array<std::array<double, 2>, 2>;

/// Cached blocks of the implicit relaxation solve at stiffness eta = dt/eps:
/// inv = (I + eta W)^{-1}, relax = eta (I + eta W)^{-1} W = I - inv,
/// relax0 = eta (I + eta W)^{-1} w0.
struct RelaxationBlocks {
    Mat2 inv{};
    Mat2 relax{};
    std::array<double, 2> relax0{};

    static RelaxationBlocks make(const QuadratureTable& q, double eta)
    {
        if (!(eta >= 0.0)) {
            throw std::invalid_argument("RelaxationBlocks: dt/eps must be non-negative");
        }
        RelaxationBlocks b;
        if (q.stages == 1) {
            b.inv[0][0] = 1.0 / (1.0 + eta * q.W[0][0]);
        } else {
            const double a = 1.0 + eta * q.W[0][0];
            const double bb = eta * q.W[0][1];
            const double c = eta * q.W[1][0];
            const double d = 1.0 + eta * q.W[1][1];
            const double det = a * d - bb * c;
            if (det == 0.0 || !std::isfinite(det)) {
                throw std::runtime_error("RelaxationBlocks: singular I + eta W");
            }
            b.inv = {{{d / det, -bb / det}, {-c / det, a / det}}};
        }
        for (int p = 0; p < q.stages; ++p) {
            for (int r = 0; r < q.stages; ++r) {
                b.relax[p][r] = (p == r ? 1.0 : 0.0) - b.inv[p][r];
            }
            double acc = 0.0;
            for (int r = 0; r < q.stages; ++r) {
                acc += b.inv[p][r] * eta * q.w0[r];
            }
            b.relax0[p] = acc;
        }
        return b;
    }
};

} // namespace kdec
