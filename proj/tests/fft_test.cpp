#include "nufft/fft.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using nufft::Complex;
using nufft::ComplexMatrix;
using nufft::ComplexVector;

namespace {

ComplexVector random_vector(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ComplexVector v(n);
    for (auto& z : v) z = Complex(dist(rng), dist(rng));
    return v;
}

}  // namespace

TEST(FftForward, UnitVectorGivesOnes) {
    ComplexVector e0 = {1, 0, 0, 0};
    const ComplexVector f = nufft::fft_forward(e0);
    for (const auto& z : f) EXPECT_NEAR(std::abs(z - Complex(1, 0)), 0.0, 1e-15);
}

TEST(FftForward, OnesVectorConcentrates) {
    ComplexVector ones(4, Complex(1, 0));
    const ComplexVector f = nufft::fft_forward(ones);
    EXPECT_NEAR(std::abs(f[0] - Complex(4, 0)), 0.0, 1e-14);
    for (std::size_t j = 1; j < 4; ++j) EXPECT_NEAR(std::abs(f[j]), 0.0, 1e-14);
}

TEST(FftForward, MatchesNaiveDft) {
    for (std::size_t n : {8u, 7u, 12u, 33u}) {
        const ComplexVector v = random_vector(n, 11 + static_cast<unsigned>(n));
        const ComplexVector got = nufft::fft_forward(v);
        const ComplexVector want = testutil::naive_dft(v);
        EXPECT_LE(testutil::rel_error(got, want, want), 1e-13) << "n=" << n;
    }
}

TEST(FftForward, EmptyInputThrows) {
    EXPECT_THROW(nufft::fft_forward({}), std::invalid_argument);
    EXPECT_THROW(nufft::fft_inverse({}), std::invalid_argument);
}

TEST(FftInverse, KnownValues) {
    const ComplexVector f = nufft::fft_inverse({{1, 0}, {1, 0}, {1, 0}, {1, 0}});
    EXPECT_NEAR(std::abs(f[0] - Complex(1, 0)), 0.0, 1e-15);
    for (std::size_t j = 1; j < 4; ++j) EXPECT_NEAR(std::abs(f[j]), 0.0, 1e-15);

    const ComplexVector g = nufft::fft_inverse({{4, 0}, {0, 0}, {0, 0}, {0, 0}});
    for (const auto& z : g) EXPECT_NEAR(std::abs(z - Complex(1, 0)), 0.0, 1e-15);
}

TEST(FftInverse, RoundTrip) {
    const ComplexVector v = random_vector(16, 5);
    const ComplexVector back = nufft::fft_inverse(nufft::fft_forward(v));
    EXPECT_LE(testutil::max_abs_diff(v, back), 1e-13);
}

TEST(FftProperties, Linearity) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(rng() % 29);
        const ComplexVector u = random_vector(n, 100 + trial);
        const ComplexVector v = random_vector(n, 200 + trial);
        const Complex a(dist(rng), dist(rng)), b(dist(rng), dist(rng));
        ComplexVector mix(n);
        for (std::size_t j = 0; j < n; ++j) mix[j] = a * u[j] + b * v[j];
        const ComplexVector lhs = nufft::fft_forward(mix);
        const ComplexVector fu = nufft::fft_forward(u);
        const ComplexVector fv = nufft::fft_forward(v);
        ComplexVector rhs(n);
        for (std::size_t j = 0; j < n; ++j) rhs[j] = a * fu[j] + b * fv[j];
        EXPECT_LE(testutil::rel_error(lhs, rhs, rhs), 1e-13);
    }
}

TEST(FftProperties, Parseval) {
    for (std::size_t n : {5u, 16u, 100u}) {
        const ComplexVector v = random_vector(n, 300 + static_cast<unsigned>(n));
        const ComplexVector f = nufft::fft_forward(v);
        const double lhs = testutil::norm2(f) * testutil::norm2(f);
        const double rhs = static_cast<double>(n) * testutil::norm2(v) * testutil::norm2(v);
        EXPECT_NEAR(lhs / rhs, 1.0, 1e-12);
    }
}

// F^T v computed as conj(N * fft_inverse(conj(v))) must match the dense
// transpose multiply (and F is symmetric so this is also F v).
TEST(FftProperties, TransposeRelation) {
    for (std::size_t n : {4u, 9u, 32u}) {
        ComplexVector v(n);
        std::mt19937_64 rng(400 + n);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (auto& z : v) z = Complex(dist(rng), 0.0);  // real test vector

        ComplexVector conj_v(n);
        for (std::size_t j = 0; j < n; ++j) conj_v[j] = std::conj(v[j]);
        ComplexVector via_inverse = nufft::fft_inverse(conj_v);
        for (auto& z : via_inverse) z = std::conj(z) * static_cast<double>(n);

        ComplexMatrix ft(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const double phase = -2.0 * M_PI * static_cast<double>(j) *
                                     static_cast<double>(k) / static_cast<double>(n);
                ft.at(j, k) = Complex(std::cos(phase), std::sin(phase));
            }
        const ComplexVector want = testutil::dense_transpose_matvec(ft, v);
        EXPECT_LE(testutil::rel_error(via_inverse, want, want), 1e-12) << "n=" << n;
    }
}

TEST(Fft2d, OneByOne) {
    ComplexMatrix c(1, 1);
    c.at(0, 0) = Complex(3.5, -2.0);
    const ComplexMatrix f = nufft::fft_2d_forward(c);
    EXPECT_EQ(f.rows, 1u);
    EXPECT_NEAR(std::abs(f.at(0, 0) - c.at(0, 0)), 0.0, 1e-15);
}

TEST(Fft2d, SingleCoefficientGivesOnes) {
    ComplexMatrix c(3, 5);
    c.at(0, 0) = Complex(1, 0);
    const ComplexMatrix f = nufft::fft_2d_forward(c);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t col = 0; col < 5; ++col)
            EXPECT_NEAR(std::abs(f.at(r, col) - Complex(1, 0)), 0.0, 1e-14);
}

TEST(Fft2d, MatchesQuadrupleLoop) {
    const std::size_t m = 3, n = 4;
    ComplexMatrix c(m, n);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& z : c.data) z = Complex(dist(rng), dist(rng));

    const ComplexMatrix got = nufft::fft_2d_forward(c);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            Complex want(0, 0);
            for (std::size_t k1 = 0; k1 < m; ++k1)
                for (std::size_t k2 = 0; k2 < n; ++k2) {
                    const double phase =
                        -2.0 * M_PI *
                        (static_cast<double>(k1 * a) / static_cast<double>(m) +
                         static_cast<double>(k2 * b) / static_cast<double>(n));
                    want += c.at(k1, k2) * Complex(std::cos(phase), std::sin(phase));
                }
            EXPECT_NEAR(std::abs(got.at(a, b) - want), 0.0, 1e-13);
        }
}

TEST(Fft2d, EmptyThrows) {
    EXPECT_THROW(nufft::fft_2d_forward(ComplexMatrix{}), std::invalid_argument);
}

TEST(Fft2d, ColumnMajorFlattening) {
    ComplexMatrix m(2, 3);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            m.at(r, c) = Complex(static_cast<double>(r), static_cast<double>(c));
    const ComplexVector v = nufft::vec_column_major(m);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t r = 0; r < 2; ++r) EXPECT_EQ(v[2 * c + r], m.at(r, c));
}
