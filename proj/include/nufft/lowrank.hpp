#pragma once

// Low-rank engine. The correction matrix A_jk = e^{-2*pi*i*delta_j*w_k}
// (|delta| <= gamma <= 1/2, w in [0,1]) is approximated by K column pairs
//
//   u_r = sum'_p a_pr (e^{-i*pi*delta} .* T_p(delta/gamma)),   p = 0 halved,
//   v_r = T_r(2*w - 1),                                        r = 0 halved,
//
// with Bessel-product coefficients a_pr. The rank K comes from the
// empirical table for the three standard working precisions and from the
// Lambert-W closed form otherwise.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nufft/fft.hpp"
#include "nufft/special.hpp"

namespace nufft {

/// Chebyshev-product expansion coefficients a_pr for one gamma, as a K x K
/// row-major block. Entries with odd |p - r| are exactly zero.
struct ChebCoefficients {
    std::size_t K = 0;
    double gamma = 0.0;
    std::vector<Complex> a;  // a[p * K + r]

    const Complex& at(std::size_t p, std::size_t r) const { return a[p * K + r]; }
};

inline ChebCoefficients cheb_coefficients(double gamma, std::size_t K) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("cheb_coefficients: gamma must be positive");
    if (gamma > 0.5)
        throw std::invalid_argument("cheb_coefficients: gamma must be <= 1/2");
    if (K < 1) throw std::invalid_argument("cheb_coefficients: K must be >= 1");

    static constexpr std::array<Complex, 4> unit_i_pow = {
        Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};

    constexpr long double kPiExt = 3.14159265358979323846264338327950288L;
    const long double z = -static_cast<long double>(gamma) * kPiExt / 2.0L;
    ChebCoefficients out;
    out.K = K;
    out.gamma = gamma;
    out.a.assign(K * K, Complex(0, 0));
    for (std::size_t p = 0; p < K; ++p) {
        for (std::size_t r = 0; r < K; ++r) {
            const long diff = static_cast<long>(r) - static_cast<long>(p);
            if (diff % 2 != 0) continue;  // parity zero, exact
            const int half_sum = static_cast<int>((p + r) / 2);
            const int half_diff = static_cast<int>(diff / 2);
            long double jj = detail::bessel_j_series(half_sum, z) *
                             detail::bessel_j_series(std::abs(half_diff), z);
            if (half_diff < 0 && (-half_diff) % 2 != 0) jj = -jj;
            out.a[p * K + r] = unit_i_pow[r % 4] * static_cast<double>(4.0L * jj);
        }
    }
    return out;
}

namespace detail {

// log of the truncation tail bound 140*(5*gamma/(K-1))^(K-1)
inline double log_tail_bound(double gamma, std::size_t K) {
    const double km1 = static_cast<double>(K - 1);
    return std::log(140.0) + km1 * (std::log(5.0 * gamma) - std::log(km1));
}

struct RankTableRow {
    double epsilon;
    std::array<std::size_t, 5> k;  // brackets (0,1/32], (1/32,1/16], (1/16,1/8], (1/8,1/4], (1/4,1/2]
};

inline constexpr std::array<double, 5> kGammaBrackets = {1.0 / 32, 1.0 / 16, 1.0 / 8,
                                                         1.0 / 4, 1.0 / 2};

inline constexpr std::array<RankTableRow, 3> kRankTable = {{
    {2.2e-16, {8, 9, 11, 13, 16}},
    {1.2e-7, {5, 6, 7, 8, 10}},
    {9.8e-4, {3, 3, 4, 5, 7}},
}};

}  // namespace detail

/// Rank needed so the correction matrix is approximated to epsilon.
/// Standard precisions (matched within a factor of 2) use the empirical
/// table; anything else falls back to the Lambert-W formula, nudged up
/// until the truncation tail bound actually clears epsilon.
inline std::size_t select_rank(double gamma, double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::domain_error("select_rank: epsilon must be in (0, 1)");
    if (!(gamma >= 0.0) || gamma > 0.5)
        throw std::domain_error("select_rank: gamma must be in [0, 1/2]");
    if (gamma == 0.0) return 1;

    for (const auto& row : detail::kRankTable) {
        const double ratio = epsilon / row.epsilon;
        if (ratio >= 0.5 && ratio <= 2.0) {
            for (std::size_t i = 0; i < detail::kGammaBrackets.size(); ++i)
                if (gamma <= detail::kGammaBrackets[i]) return row.k[i];
        }
    }

    const double w = lambert_w(std::log(140.0 / epsilon) / (5.0 * gamma));
    const double raw = 5.0 * gamma * std::exp(w);
    std::size_t k = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(raw)));
    constexpr std::size_t kRankCap = 64;
    const double log_eps = std::log(epsilon);
    while (k <= kRankCap && detail::log_tail_bound(gamma, k) > log_eps) ++k;
    if (k > kRankCap)
        throw std::domain_error("select_rank: epsilon below attainable precision (rank cap 64)");
    return k;
}

/// Columns T_0(x) .. T_{K-1}(x) by the three-term recurrence, row-major N x K.
/// Inputs may overshoot [-1, 1] by at most 1e-12 and are clamped. The
/// recurrence runs in extended precision: near the endpoints its forward
/// error grows like p^2 ulps, which would otherwise dominate for grids
/// whose scaled nodes are not exactly representable.
inline std::vector<double> cheb_eval_matrix(const std::vector<double>& points, std::size_t K) {
    if (K < 1) throw std::invalid_argument("cheb_eval_matrix: K must be >= 1");
    const std::size_t n = points.size();
    std::vector<double> t(n * K);
    std::vector<long double> row(K);
    for (std::size_t j = 0; j < n; ++j) {
        double xd = points[j];
        if (std::abs(xd) > 1.0 + 1e-12)
            throw std::domain_error("cheb_eval_matrix: point outside [-1, 1]");
        xd = std::clamp(xd, -1.0, 1.0);
        const long double x = xd;
        row[0] = 1.0L;
        if (K > 1) row[1] = x;
        for (std::size_t p = 2; p < K; ++p) row[p] = 2.0L * x * row[p - 1] - row[p - 2];
        for (std::size_t p = 0; p < K; ++p) t[j * K + p] = static_cast<double>(row[p]);
    }
    return t;
}

/// K column pairs (u_r, v_r) with sum_r u_r v_r^T ~ A. Columns of U have the
/// sample count's length; columns of V the frequency count's length.
struct LowRankFactors {
    std::size_t rank = 0;
    std::vector<ComplexVector> u;
    std::vector<ComplexVector> v;
};

namespace detail {
// The p-sum is evaluated a few terms past K so the remaining error is the
// r-truncation tail alone; the factor rank is unaffected.
inline constexpr std::size_t kCoefficientPadding = 4;
}  // namespace detail

/// Build the rank-K factors for A_jk = e^{-2*pi*i*delta_j*omega_scaled_k}.
/// gamma == 0 short-circuits to the exact rank-1 all-ones factorization.
inline LowRankFactors build_factors(const std::vector<double>& delta, double gamma,
                                    const std::vector<double>& omega_scaled,
                                    double epsilon) {
    LowRankFactors out;
    const std::size_t n = delta.size();
    const std::size_t m = omega_scaled.size();
    if (gamma == 0.0) {
        out.rank = 1;
        out.u.assign(1, ComplexVector(n, Complex(1, 0)));
        out.v.assign(1, ComplexVector(m, Complex(1, 0)));
        return out;
    }

    const std::size_t K = select_rank(gamma, epsilon);
    const std::size_t P = K + detail::kCoefficientPadding;
    const ChebCoefficients coeffs = cheb_coefficients(gamma, P);

    std::vector<double> scaled(n);
    for (std::size_t j = 0; j < n; ++j) scaled[j] = delta[j] / gamma;
    const std::vector<double> tp = cheb_eval_matrix(scaled, P);

    ComplexVector prefactor(n);
    for (std::size_t j = 0; j < n; ++j)
        prefactor[j] = std::polar(1.0, -M_PI * delta[j]);

    out.rank = K;
    out.u.assign(K, ComplexVector(n));
    for (std::size_t r = 0; r < K; ++r) {
        for (std::size_t j = 0; j < n; ++j) {
            // p = 0 term halved; extended accumulation keeps the mild
            // cancellation among the a_pr terms below an ulp
            std::complex<long double> acc = 0.5L * static_cast<std::complex<long double>>(
                                                       coeffs.at(0, r));
            for (std::size_t p = 1; p < P; ++p)
                acc += static_cast<std::complex<long double>>(coeffs.at(p, r)) *
                       static_cast<long double>(tp[j * P + p]);
            out.u[r][j] = prefactor[j] * static_cast<Complex>(acc);
        }
    }

    std::vector<double> w(m);
    for (std::size_t k = 0; k < m; ++k) w[k] = 2.0 * omega_scaled[k] - 1.0;
    const std::vector<double> tr = cheb_eval_matrix(w, K);
    out.v.assign(K, ComplexVector(m));
    for (std::size_t r = 0; r < K; ++r) {
        const double weight = (r == 0) ? 0.5 : 1.0;  // outer prime absorbed here
        for (std::size_t k = 0; k < m; ++k) out.v[r][k] = weight * tr[k * K + r];
    }
    return out;
}

}  // namespace nufft
