#pragma once

// Brute-force references and adversarial inputs. These are the ground truth
// the fast transforms are tested against, so they are built to be more
// accurate than anything they check: phase arguments are reduced mod 1
// before scaling by 2*pi (an FMA product split keeps the reduction exact),
// and sums are accumulated with Neumaier compensation.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nufft/fft.hpp"

namespace nufft {
namespace detail {

struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double value) {
        const double t = sum + value;
        if (std::abs(sum) >= std::abs(value))
            comp += (sum - t) + value;
        else
            comp += (value - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

struct CompensatedComplexSum {
    CompensatedSum re, im;

    void add(Complex z) {
        re.add(z.real());
        im.add(z.imag());
    }

    Complex value() const { return {re.value(), im.value()}; }
};

inline constexpr long double kTwoPiExt = 6.28318530717958647692528676655900577L;

// e^{-2*pi*i*turns} with the reduction and the 2*pi scaling in extended
// precision; a double 2*pi would already cost ~2 ulps of phase.
inline Complex unit_phase_turns(long double turns) {
    turns -= std::floor(turns);
    const long double phase = -kTwoPiExt * turns;
    return {static_cast<double>(std::cos(phase)), static_cast<double>(std::sin(phase))};
}

// e^{-2*pi*i*x*w} with the product x*w reduced mod 1 in double-double
// arithmetic, so large arguments lose no phase accuracy.
inline Complex unit_phase_product(double x, double w) {
    const double p = x * w;
    const double err = std::fma(x, w, -p);
    const long double turns =
        static_cast<long double>(p - std::floor(p)) + static_cast<long double>(err);
    return unit_phase_turns(turns);
}

}  // namespace detail

/// Naive NUDFT sum f_j = sum_k c_k e^{-2*pi*i*x_j*w_k}, O(N^2).
inline ComplexVector nudft_direct(const std::vector<double>& x,
                                  const std::vector<double>& omega,
                                  const ComplexVector& c) {
    if (x.size() != omega.size() || x.size() != c.size())
        throw std::invalid_argument("nudft_direct: length mismatch");
    const std::size_t n = x.size();
    ComplexVector f(n);
    for (std::size_t j = 0; j < n; ++j) {
        detail::CompensatedComplexSum acc;
        for (std::size_t k = 0; k < n; ++k)
            acc.add(c[k] * detail::unit_phase_product(x[j], omega[k]));
        f[j] = acc.value();
    }
    return f;
}

/// Naive 2D NUDFT: f_j = sum_{r<m} sum_{c<n} C_{r,c} e^{-2*pi*i*(r*y_j + c*x_j)}.
/// Row index pairs with y (the m-grid axis), column index with x (n-grid).
inline ComplexVector nudft2d_direct(const std::vector<double>& x,
                                    const std::vector<double>& y,
                                    const ComplexMatrix& coeffs) {
    if (x.size() != y.size())
        throw std::invalid_argument("nudft2d_direct: sample length mismatch");
    if (coeffs.data.size() != coeffs.rows * coeffs.cols || coeffs.rows * coeffs.cols == 0)
        throw std::invalid_argument("nudft2d_direct: inconsistent matrix dimensions");
    ComplexVector f(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const long double xj = x[j], yj = y[j];
        detail::CompensatedComplexSum acc;
        for (std::size_t r = 0; r < coeffs.rows; ++r)
            for (std::size_t c = 0; c < coeffs.cols; ++c)
                acc.add(coeffs.at(r, c) *
                        detail::unit_phase_turns(static_cast<long double>(r) * yj +
                                                 static_cast<long double>(c) * xj));
        f[j] = acc.value();
    }
    return f;
}

/// Perturbed-equispaced sample family maximizing the approximation
/// difficulty for a given gamma:
///   x_j = (j + gamma)/N for j <= floor(N/2), (j - gamma)/N otherwise,
/// normalized into [0, 1).
inline std::vector<double> worst_grid(std::size_t n, double gamma) {
    if (n < 1) throw std::invalid_argument("worst_grid: N must be >= 1");
    if (!(gamma >= 0.0) || gamma > 0.5)
        throw std::invalid_argument("worst_grid: gamma must be in [0, 1/2]");
    std::vector<double> x(n);
    const double dn = static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double shifted = (j <= n / 2) ? (static_cast<double>(j) + gamma)
                                            : (static_cast<double>(j) - gamma);
        double v = shifted / dn;
        v -= std::floor(v);
        x[j] = v;
    }
    return x;
}

/// Dense type-II matrix with entries e^{-2*pi*i*x_j*k}, 0 <= k < n.
/// Guarded at n, |x| <= 4096 to keep dense checks at desk scale.
inline ComplexMatrix dense_nudft2_matrix(const std::vector<double>& x, std::size_t n) {
    constexpr std::size_t kDenseGuard = 4096;
    if (x.size() > kDenseGuard || n > kDenseGuard)
        throw std::invalid_argument("dense_nudft2_matrix: size exceeds dense guard (4096)");
    if (n == 0 || x.empty())
        throw std::invalid_argument("dense_nudft2_matrix: empty input");
    ComplexMatrix m(x.size(), n);
    for (std::size_t j = 0; j < x.size(); ++j)
        for (std::size_t k = 0; k < n; ++k)
            m.at(j, k) = detail::unit_phase_product(x[j], static_cast<double>(k));
    return m;
}

}  // namespace nufft
