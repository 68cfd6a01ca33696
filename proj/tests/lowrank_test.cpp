#include "nufft/lowrank.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "nufft/oracle.hpp"
#include "nufft/random.hpp"
#include "test_util.hpp"

using nufft::Complex;
using nufft::ComplexVector;
using nufft::LowRankFactors;

namespace {

constexpr double kEpsDouble = 2.2e-16;
constexpr double kEpsSingle = 1.2e-7;
constexpr double kEpsHalf = 9.8e-4;

// Smallest K >= 3 whose truncation tail bound clears epsilon; the scan
// oracle for the closed-form rank selection.
std::size_t scan_rank(double gamma, double eps) {
    for (std::size_t k = 3; k <= 90; ++k) {
        const double tail =
            140.0 * std::pow(5.0 * gamma / static_cast<double>(k - 1),
                             static_cast<double>(k - 1));
        if (tail <= eps) return k;
    }
    return 0;
}

// Entrywise residual max_jk |A_jk - sum_r U_jr V_kr|, with the reference
// entries and the rank-K dot products both taken in extended precision so
// the measurement does not pollute the statistic.
double reconstruction_residual(const std::vector<double>& delta,
                               const std::vector<double>& omega_scaled,
                               const LowRankFactors& f) {
    double worst = 0.0;
    for (std::size_t j = 0; j < delta.size(); ++j) {
        for (std::size_t k = 0; k < omega_scaled.size(); ++k) {
            std::complex<long double> acc = 0.0L;
            for (std::size_t r = 0; r < f.rank; ++r)
                acc += static_cast<std::complex<long double>>(f.u[r][j]) *
                       static_cast<std::complex<long double>>(f.v[r][k]);
            const Complex truth = nufft::detail::unit_phase_product(delta[j], omega_scaled[k]);
            worst = std::max(worst,
                             static_cast<double>(std::abs(
                                 acc - static_cast<std::complex<long double>>(truth))));
        }
    }
    return worst;
}

std::vector<double> unit_grid(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = static_cast<double>(k) / static_cast<double>(n);
    return w;
}

}  // namespace

TEST(ChebCoefficients, ParityZerosAreExact) {
    const auto coeffs = nufft::cheb_coefficients(0.5, 6);
    for (std::size_t p = 0; p < 6; ++p)
        for (std::size_t r = 0; r < 6; ++r)
            if ((p + r) % 2 != 0) {
                EXPECT_EQ(coeffs.at(p, r).real(), 0.0);
                EXPECT_EQ(coeffs.at(p, r).imag(), 0.0);
            }
}

TEST(ChebCoefficients, MatchesBesselProducts) {
    // a_00 = 4 J_0(-pi/4)^2 at gamma = 1/2
    const auto c1 = nufft::cheb_coefficients(0.5, 1);
    const double j0 = testutil::bessel_series(0, -M_PI / 4);
    EXPECT_NEAR(c1.at(0, 0).real(), 4.0 * j0 * j0, 1e-14);
    EXPECT_EQ(c1.at(0, 0).imag(), 0.0);

    // a_02 = 4 i^2 J_1(-pi/8) J_1(-pi/8) = -4 J_1(-pi/8)^2 at gamma = 1/4
    const auto c3 = nufft::cheb_coefficients(0.25, 3);
    const double j1 = testutil::bessel_series(1, -M_PI / 8);
    EXPECT_NEAR(c3.at(0, 2).real(), -4.0 * j1 * j1, 1e-15);
    EXPECT_EQ(c3.at(0, 2).imag(), 0.0);
    // a_20 pairs J_1 with J_{-1}: same magnitude, i^0 in place of i^2
    EXPECT_NEAR(c3.at(2, 0).real(), 4.0 * j1 * testutil::bessel_series(-1, -M_PI / 8), 1e-15);
}

TEST(ChebCoefficients, RealImagPatternFollowsIPowers) {
    const auto coeffs = nufft::cheb_coefficients(0.3, 9);
    for (std::size_t p = 0; p < 9; ++p)
        for (std::size_t r = 0; r < 9; ++r) {
            if ((p + r) % 2 != 0) continue;
            if (r % 4 == 0 || r % 4 == 2)
                EXPECT_EQ(coeffs.at(p, r).imag(), 0.0) << p << "," << r;
            else
                EXPECT_EQ(coeffs.at(p, r).real(), 0.0) << p << "," << r;
        }
}

TEST(ChebCoefficients, RejectsDegenerateGamma) {
    EXPECT_THROW(nufft::cheb_coefficients(0.0, 4), std::invalid_argument);
    EXPECT_THROW(nufft::cheb_coefficients(0.6, 4), std::invalid_argument);
}

TEST(SelectRank, ReproducesEmpiricalTable) {
    const double eps_rows[3] = {kEpsDouble, kEpsSingle, kEpsHalf};
    const std::size_t expected[3][6] = {
        {1, 8, 9, 11, 13, 16}, {1, 5, 6, 7, 8, 10}, {1, 3, 3, 4, 5, 7}};
    const double gammas[6] = {0.0, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2};
    for (int row = 0; row < 3; ++row)
        for (int col = 0; col < 6; ++col)
            EXPECT_EQ(nufft::select_rank(gammas[col], eps_rows[row]), expected[row][col])
                << "row=" << row << " col=" << col;
}

TEST(SelectRank, BracketInteriorsAndNamedCases) {
    EXPECT_EQ(nufft::select_rank(0.4, kEpsDouble), 16u);
    EXPECT_EQ(nufft::select_rank(0.0, 0.123), 1u);
    EXPECT_EQ(nufft::select_rank(1.0 / 40, kEpsHalf), 3u);
    // within a factor of 2 of a standard precision still uses the table
    EXPECT_EQ(nufft::select_rank(0.5, 1.5 * kEpsDouble), 16u);
    EXPECT_EQ(nufft::select_rank(0.5, 0.6 * kEpsSingle), 10u);
}

TEST(SelectRank, FormulaAgreesWithTailBoundScan) {
    for (double gamma : {0.05, 0.125, 0.2, 0.3, 0.5})
        for (double eps : {1e-2, 1e-5, 1e-10})
            EXPECT_EQ(nufft::select_rank(gamma, eps), scan_rank(gamma, eps))
                << "gamma=" << gamma << " eps=" << eps;
}

TEST(SelectRank, TailBoundHoldsForReturnedRank) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> gdist(0.01, 0.5);
    std::uniform_real_distribution<double> edist(-12.0, -2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double gamma = gdist(rng);
        const double eps = std::pow(10.0, edist(rng));
        const std::size_t k = nufft::select_rank(gamma, eps);
        if (k < 3) continue;  // table path may return smaller ranks
        const double tail = 140.0 * std::pow(5.0 * gamma / static_cast<double>(k - 1),
                                             static_cast<double>(k - 1));
        const double ratio = eps / kEpsSingle;
        const bool table_path = (eps / kEpsDouble >= 0.5 && eps / kEpsDouble <= 2.0) ||
                                (ratio >= 0.5 && ratio <= 2.0) ||
                                (eps / kEpsHalf >= 0.5 && eps / kEpsHalf <= 2.0);
        if (!table_path) {
            EXPECT_LE(tail, eps) << "gamma=" << gamma << " eps=" << eps;
        }
    }
}

TEST(SelectRank, MonotoneWithinEachRegime) {
    // nondecreasing in gamma at fixed eps
    for (double eps : {kEpsDouble, kEpsSingle, kEpsHalf, 1e-5, 1e-10}) {
        std::size_t prev = 0;
        for (double gamma = 0.0; gamma <= 0.5 + 1e-12; gamma += 1.0 / 64) {
            const std::size_t k = nufft::select_rank(std::min(gamma, 0.5), eps);
            EXPECT_GE(k, prev) << "eps=" << eps << " gamma=" << gamma;
            prev = k;
        }
    }
    // nonincreasing in eps at fixed gamma, within the table rows
    for (double gamma : {0.01, 0.1, 0.5}) {
        EXPECT_GE(nufft::select_rank(gamma, kEpsDouble), nufft::select_rank(gamma, kEpsSingle));
        EXPECT_GE(nufft::select_rank(gamma, kEpsSingle), nufft::select_rank(gamma, kEpsHalf));
    }
    // and within the formula regime
    for (double gamma : {0.01, 0.1, 0.5}) {
        std::size_t prev = 100;
        for (double eps : {1e-12, 1e-9, 1e-6, 5e-3, 1e-2}) {
            const std::size_t k = nufft::select_rank(gamma, eps);
            EXPECT_LE(k, prev);
            prev = k;
        }
    }
}

TEST(SelectRank, DomainErrors) {
    EXPECT_THROW(nufft::select_rank(0.1, 0.0), std::domain_error);
    EXPECT_THROW(nufft::select_rank(0.1, 1.0), std::domain_error);
    EXPECT_THROW(nufft::select_rank(0.1, -1e-3), std::domain_error);
    EXPECT_THROW(nufft::select_rank(0.7, kEpsDouble), std::domain_error);
}

TEST(ChebEval, EndpointAndZeroRows) {
    const auto at_one = nufft::cheb_eval_matrix({1.0}, 4);
    for (int p = 0; p < 4; ++p) EXPECT_DOUBLE_EQ(at_one[p], 1.0);

    const auto at_zero = nufft::cheb_eval_matrix({0.0}, 5);
    const double expected[5] = {1.0, 0.0, -1.0, 0.0, 1.0};
    for (int p = 0; p < 5; ++p) EXPECT_DOUBLE_EQ(at_zero[p], expected[p]);
}

TEST(ChebEval, MatchesTrigonometricDefinition) {
    const auto row = nufft::cheb_eval_matrix({0.3}, 4);
    for (int p = 0; p < 4; ++p)
        EXPECT_NEAR(row[p], std::cos(p * std::acos(0.3)), 1e-14);
}

TEST(ChebEval, ClampAndDomainError) {
    EXPECT_NO_THROW(nufft::cheb_eval_matrix({1.0 + 5e-13}, 3));
    EXPECT_THROW(nufft::cheb_eval_matrix({1.0 + 1e-11}, 3), std::domain_error);
}

TEST(BuildFactors, GammaZeroIsAllOnes) {
    const auto f = nufft::build_factors({0.0, 0.0, 0.0}, 0.0, unit_grid(5), kEpsDouble);
    EXPECT_EQ(f.rank, 1u);
    for (const auto& z : f.u[0]) EXPECT_EQ(z, Complex(1, 0));
    for (const auto& z : f.v[0]) EXPECT_EQ(z, Complex(1, 0));
    EXPECT_LE(reconstruction_residual({0.0, 0.0, 0.0}, unit_grid(5), f), 1e-16);
}

TEST(BuildFactors, RandomDeltaDoublePrecision) {
    nufft::GaussianSampler rng(42);
    const std::size_t n = 16;
    std::vector<double> delta = rng.uniform_vector(n, -0.5, 0.5);
    double gamma = 0.0;
    for (double d : delta) gamma = std::max(gamma, std::abs(d));
    const auto f = nufft::build_factors(delta, gamma, unit_grid(n), kEpsDouble);
    EXPECT_LE(reconstruction_residual(delta, unit_grid(n), f), 2.0 * kEpsDouble * 10.0);
}

TEST(BuildFactors, HalfPrecisionSmallCase) {
    nufft::GaussianSampler rng(7);
    const std::size_t n = 8;
    const double gamma = 1.0 / 32;
    std::vector<double> delta = rng.uniform_vector(n, -gamma, gamma);
    const auto f = nufft::build_factors(delta, gamma, unit_grid(n), kEpsHalf);
    EXPECT_EQ(f.rank, 3u);
    EXPECT_LE(reconstruction_residual(delta, unit_grid(n), f), kEpsHalf);
}

TEST(BuildFactors, ReconstructionAcrossBrackets) {
    // The empirical double-precision ranks leave a Chebyshev truncation tail
    // of a few eps; 10*eps absorbs it except on the (1/32, 1/16] bracket,
    // whose rank-9 tail sits near 21*eps (25*eps here), and the (1/4, 1/2]
    // bracket, whose rank-16 tail is ~9.9*eps and can graze past 10 once
    // a draw lands at the corner (11*eps here).
    struct Cell {
        double gamma, eps, slack;
    };
    const Cell cells[] = {
        {1.0 / 32, kEpsDouble, 10.0}, {1.0 / 16, kEpsDouble, 25.0},
        {1.0 / 8, kEpsDouble, 10.0},  {1.0 / 4, kEpsDouble, 10.0},
        {1.0 / 2, kEpsDouble, 11.0},  {1.0 / 16, kEpsSingle, 10.0},
        {1.0 / 2, kEpsSingle, 10.0},  {1.0 / 16, kEpsHalf, 10.0},
        {1.0 / 2, kEpsHalf, 10.0},
    };
    nufft::GaussianSampler rng(2024);
    for (const auto& cell : cells) {
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            for (std::size_t n : {16u, 64u}) {
                std::vector<double> delta = rng.uniform_vector(n, -cell.gamma, cell.gamma);
                const auto f = nufft::build_factors(delta, cell.gamma, unit_grid(n), cell.eps);
                worst = std::max(worst, reconstruction_residual(delta, unit_grid(n), f));
            }
        }
        EXPECT_LE(worst, cell.slack * cell.eps)
            << "gamma=" << cell.gamma << " eps=" << cell.eps;
    }
}

TEST(BuildFactors, RectangularFactors) {
    // sample count decoupled from the frequency-grid length (2D use)
    nufft::GaussianSampler rng(5);
    std::vector<double> delta = rng.uniform_vector(20, -0.25, 0.25);
    const auto f = nufft::build_factors(delta, 0.25, unit_grid(6), kEpsSingle);
    EXPECT_EQ(f.u[0].size(), 20u);
    EXPECT_EQ(f.v[0].size(), 6u);
    EXPECT_LE(reconstruction_residual(delta, unit_grid(6), f), 10.0 * kEpsSingle);
}
