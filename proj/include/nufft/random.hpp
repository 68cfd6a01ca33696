#pragma once

// Seeded Gaussian sampler with a fixed algorithm (mt19937_64 + Box-Muller),
// so tables produced with a given seed are reproducible across platforms.
// std::normal_distribution is implementation-defined and is avoided here.

#include <cmath>
#include <random>

#include "nufft/fft.hpp"

namespace nufft {

class GaussianSampler {
  public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return std::ldexp(static_cast<double>(engine_() >> 11), -53);
    }

    ComplexVector complex_vector(std::size_t n) {
        ComplexVector out(n);
        for (auto& z : out) {
            const double re = (*this)();
            const double im = (*this)();
            z = Complex(re, im);
        }
        return out;
    }

    std::vector<double> uniform_vector(std::size_t n, double lo, double hi) {
        std::vector<double> out(n);
        for (auto& v : out) v = lo + (hi - lo) * uniform();
        return out;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace nufft
