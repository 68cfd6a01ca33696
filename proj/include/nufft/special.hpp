#pragma once

// Special functions used by the low-rank construction: the principal
// Lambert-W branch on [0, inf) and integer-order Bessel J for small
// arguments. Both are evaluated only in regimes where a simple method
// is provably accurate (Halley iteration on a smooth branch; ascending
// series with |z| <= 2).

#include <cmath>
#include <stdexcept>

namespace nufft {

/// Principal-branch Lambert-W on [0, inf): returns w >= 0 with w*e^w = x.
inline double lambert_w(double x) {
    if (std::isnan(x) || x < 0.0)
        throw std::domain_error("lambert_w: argument must be nonnegative");
    if (x == 0.0) return 0.0;
    double w = std::max(0.0, std::log1p(x));
    for (int iter = 0; iter < 50; ++iter) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        // Halley step
        const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        const double step = f / denom;
        w -= step;
        if (std::abs(f) <= 1e-14 * std::abs(x) || std::abs(step) <= 1e-16 * std::abs(w))
            break;
    }
    return w;
}

namespace detail {

// Series evaluated in extended precision; the double rounding happens once
// at the caller.
inline long double bessel_j_series(int order, long double z) {
    const long double h = 0.5L * z;
    long double term = 1.0L;
    for (int k = 1; k <= order; ++k) term *= h / static_cast<long double>(k);
    long double sum = term;
    const long double h2 = -h * h;
    for (int m = 1; m <= 64; ++m) {
        term *= h2 / (static_cast<long double>(m) * static_cast<long double>(m + order));
        sum += term;
        if (std::abs(static_cast<double>(term)) < 1e-22) break;
    }
    return sum;
}

}  // namespace detail

/// Bessel J of nonnegative integer order for |z| <= 2, by ascending series:
///   J_n(z) = sum_m (-1)^m (z/2)^{2m+n} / (m! (m+n)!).
/// Terms decay faster than geometrically here.
inline double bessel_j_int(int order, double z) {
    if (order < 0) throw std::domain_error("bessel_j_int: order must be >= 0");
    if (!(std::abs(z) <= 2.0))
        throw std::domain_error("bessel_j_int: |z| must be <= 2");
    return static_cast<double>(detail::bessel_j_series(order, z));
}

/// J_n for possibly negative integer order via J_{-n}(z) = (-1)^n J_n(z).
inline double bessel_j_signed(int order, double z) {
    if (order >= 0) return bessel_j_int(order, z);
    const double v = bessel_j_int(-order, z);
    return (order % 2 == 0) ? v : -v;
}

}  // namespace nufft
