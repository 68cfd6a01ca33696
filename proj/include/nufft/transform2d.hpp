#pragma once

// Two-dimensional type-II transform. Each axis gets its own grid
// assignment and low-rank factors; execution is the K1*K2-term sum of
// diagonally-scaled 2D FFTs
//
//   f_j = sum_{r1,r2} (ux_r1)_j (uy_r2)_j [F_m D_{vy_r2} C D_{vx_r1} F_n^T](ty_j, tx_j)
//
// where the row-stage product C D_{vx_r1} F_n^T is independent of r2 and
// computed once per r1. The coefficient matrix is m x n with rows pairing
// the y axis (m-grid) and columns the x axis (n-grid).

#include <cstddef>
#include <utility>
#include <stdexcept>
#include <vector>

#include "nufft/fft.hpp"
#include "nufft/lowrank.hpp"
#include "nufft/transforms.hpp"

namespace nufft {

struct GridAssignment2D {
    std::vector<long> sx, sy;
    std::vector<std::size_t> tx, ty;
    double gammaX = 0.0;
    double gammaY = 0.0;
};

/// Per-axis nearest-node assignment: x against the n-grid, y against the
/// m-grid, with the wraparound t = mod(s, grid).
inline GridAssignment2D grid_assign_2d(const std::vector<double>& x,
                                       const std::vector<double>& y, std::size_t m,
                                       std::size_t n) {
    if (m < 1 || n < 1) throw std::invalid_argument("grid_assign_2d: grid sizes must be >= 1");
    if (x.size() != y.size())
        throw std::invalid_argument("grid_assign_2d: coordinate length mismatch");
    GridAssignment2D out;
    GridAssignment gx = grid_assign(x, n);
    GridAssignment gy = grid_assign(y, m);
    out.sx = std::move(gx.s);
    out.tx = std::move(gx.t);
    out.gammaX = gx.gamma;
    out.sy = std::move(gy.s);
    out.ty = std::move(gy.t);
    out.gammaY = gy.gamma;
    return out;
}

struct Plan2D {
    std::size_t m = 0, n = 0;
    std::vector<double> x, y;  // normalized
    GridAssignment2D grid;
    LowRankFactors factorsX;  // rank K1, V columns of length n
    LowRankFactors factorsY;  // rank K2, V columns of length m
    std::vector<std::size_t> flatIndex;  // m*tx_j + ty_j
    double epsilon = 0.0;

    std::size_t size() const { return x.size(); }
    std::size_t rank_x() const { return factorsX.rank; }
    std::size_t rank_y() const { return factorsY.rank; }
};

inline Plan2D plan_nufft2d2(const std::vector<double>& x_raw, const std::vector<double>& y_raw,
                            std::size_t m, std::size_t n, double epsilon) {
    if (x_raw.empty()) throw std::invalid_argument("plan_nufft2d2: no samples");
    if (m < 1 || n < 1) throw std::invalid_argument("plan_nufft2d2: grid sizes must be >= 1");
    detail::check_epsilon(epsilon);

    Plan2D plan;
    plan.m = m;
    plan.n = n;
    plan.epsilon = epsilon;
    plan.x = normalize_samples(x_raw);
    plan.y = normalize_samples(y_raw);
    plan.grid = grid_assign_2d(plan.x, plan.y, m, n);

    const std::size_t count = plan.x.size();
    std::vector<double> delta_x(count), delta_y(count);
    for (std::size_t j = 0; j < count; ++j) {
        delta_x[j] = detail::exact_perturbation(static_cast<double>(n), plan.x[j],
                                                static_cast<double>(plan.grid.sx[j]));
        delta_y[j] = detail::exact_perturbation(static_cast<double>(m), plan.y[j],
                                                static_cast<double>(plan.grid.sy[j]));
    }
    std::vector<double> wx(n), wy(m);
    for (std::size_t k = 0; k < n; ++k) wx[k] = static_cast<double>(k) / static_cast<double>(n);
    for (std::size_t k = 0; k < m; ++k) wy[k] = static_cast<double>(k) / static_cast<double>(m);
    plan.factorsX = build_factors(delta_x, plan.grid.gammaX, wx, epsilon);
    plan.factorsY = build_factors(delta_y, plan.grid.gammaY, wy, epsilon);

    plan.flatIndex.resize(count);
    for (std::size_t j = 0; j < count; ++j)
        plan.flatIndex[j] = m * plan.grid.tx[j] + plan.grid.ty[j];

    fft_plan_for(m);
    fft_plan_for(n);
    return plan;
}

namespace detail {

// reuse_row_stage = false recomputes the r2-independent product inside the
// inner loop; the operation sequence is unchanged, so results must match
// the cached path bit for bit. Kept as a validation knob.
inline ComplexVector exec_nufft2d2_impl(const Plan2D& plan, const ComplexMatrix& coeffs,
                                        bool reuse_row_stage) {
    if (coeffs.rows != plan.m || coeffs.cols != plan.n)
        throw std::invalid_argument("exec_nufft2d2: coefficient dimensions mismatch");
    const std::size_t count = plan.size();
    ComplexVector f(count, Complex(0, 0));

    ComplexMatrix row_stage;
    for (std::size_t r1 = 0; r1 < plan.rank_x(); ++r1) {
        const ComplexVector& vx = plan.factorsX.v[r1];
        const ComplexVector& ux = plan.factorsX.u[r1];
        auto compute_row_stage = [&] {
            ComplexMatrix p = coeffs;
            for (std::size_t r = 0; r < p.rows; ++r)
                for (std::size_t c = 0; c < p.cols; ++c) p.at(r, c) *= vx[c];
            fft_rows_forward(p);  // right-multiply by F_n (symmetric)
            return p;
        };
        if (reuse_row_stage) row_stage = compute_row_stage();

        for (std::size_t r2 = 0; r2 < plan.rank_y(); ++r2) {
            ComplexMatrix full = reuse_row_stage ? row_stage : compute_row_stage();
            const ComplexVector& vy = plan.factorsY.v[r2];
            for (std::size_t r = 0; r < full.rows; ++r)
                for (std::size_t c = 0; c < full.cols; ++c) full.at(r, c) *= vy[r];
            fft_cols_forward(full);  // left-multiply by F_m

            const ComplexVector& uy = plan.factorsY.u[r2];
            for (std::size_t j = 0; j < count; ++j)
                f[j] += ux[j] * uy[j] * full.at(plan.grid.ty[j], plan.grid.tx[j]);
        }
    }
    return f;
}

}  // namespace detail

/// 2D type-II execution; output has one entry per sample.
inline ComplexVector exec_nufft2d2(const Plan2D& plan, const ComplexMatrix& coeffs) {
    return detail::exec_nufft2d2_impl(plan, coeffs, /*reuse_row_stage=*/true);
}

}  // namespace nufft
