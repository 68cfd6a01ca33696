#pragma once

// Subcommand implementations behind the nufft CLI. Kept header-only and
// separate from main() so the argument wiring stays trivial.
//
// Exit codes: 0 success, 1 verification failure, 2 I/O or usage, 3 domain.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "nufft/csv.hpp"
#include "nufft/nufft.hpp"
#include "nufft/random.hpp"

namespace nufft::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFail = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitDomain = 3;

namespace detail {

inline double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// Median wall time of one call, inner loop auto-scaled so each measurement
// spans at least ~2 ms.
template <typename Fn>
double time_median(Fn&& fn, unsigned reps) {
    fn();  // warmup
    std::size_t loops = 1;
    for (;;) {
        const double t0 = now_seconds();
        for (std::size_t i = 0; i < loops; ++i) fn();
        const double dt = now_seconds() - t0;
        if (dt >= 2e-3 || loops >= (1u << 20)) break;
        loops *= 2;
    }
    std::vector<double> times(std::max(1u, reps));
    for (auto& t : times) {
        const double t0 = now_seconds();
        for (std::size_t i = 0; i < loops; ++i) fn();
        t = (now_seconds() - t0) / static_cast<double>(loops);
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

// Random grid perturbed from equispaced with max deviation exactly gamma.
inline std::vector<double> perturbed_grid(std::size_t n, double gamma, GaussianSampler& rng) {
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double delta = gamma * (2.0 * rng.uniform() - 1.0);
        x[j] = (static_cast<double>(j) + delta) / static_cast<double>(n);
    }
    if (n > 0) x[0] = gamma / static_cast<double>(n);
    return normalize_samples(x);
}

inline std::vector<double> integer_freqs(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = static_cast<double>(k);
    return w;
}

inline double norm2(const ComplexVector& v) {
    long double s = 0.0L;
    for (const auto& z : v) s += std::norm(z);
    return static_cast<double>(std::sqrt(s));
}

inline double rel_error_against(const ComplexVector& got, const ComplexVector& want,
                                const ComplexVector& scale) {
    long double s = 0.0L;
    for (std::size_t j = 0; j < got.size(); ++j) s += std::norm(got[j] - want[j]);
    return static_cast<double>(std::sqrt(s)) / norm2(scale);
}

}  // namespace detail

struct TransformOptions {
    std::string type;  // 1 | 2 | 3 | 2d2 | inv1 | inv2
    std::vector<std::string> inputs;
    std::string out;
    double eps = 2.2e-16;
    double tol = 1e-12;
    unsigned threads = 1;
    bool plain_fft = false;
};

inline int run_transform(const TransformOptions& opt) {
    auto usage_error = [](const std::string& msg) {
        std::fprintf(stderr, "nufft transform: %s\n", msg.c_str());
        return kExitIo;
    };

    const auto t_read = detail::now_seconds();
    if (opt.type == "2" || opt.type == "inv2") {
        if (opt.inputs.size() != 2)
            return usage_error("--type " + opt.type + " needs --in SAMPLES.csv DATA.csv");
        const auto x = read_samples(opt.inputs[0]);
        const auto data = read_complex_vector(opt.inputs[1]);

        if (opt.plain_fft) {
            const auto f = opt.type == "2" ? fft_forward(data) : fft_inverse(data);
            write_complex_vector(opt.out, f);
            std::fprintf(stderr, "plain fft path, N=%zu\n", data.size());
            return kExitOk;
        }

        const auto t_plan = detail::now_seconds();
        const Plan2 plan = plan_nufft2(x, opt.eps);
        const auto t_exec = detail::now_seconds();
        ComplexVector result;
        std::size_t iterations = 0;
        if (opt.type == "2") {
            result = exec_nufft2(plan, data, opt.threads);
        } else {
            const CgReport report = inufft2(plan, data, opt.tol);
            if (!report.converged) {
                std::fprintf(stderr, "inv2: cg stalled at residual %.3e after %zu iterations\n",
                             report.relativeResidual, report.iterations);
                return kExitDomain;
            }
            result = report.solution;
            iterations = report.iterations;
        }
        const auto t_done = detail::now_seconds();
        write_complex_vector(opt.out, result);
        std::fprintf(stderr, "type=%s N=%zu K=%zu gamma=%.6g plan_s=%.6f online_s=%.6f",
                     opt.type.c_str(), plan.size(), plan.rank(), plan.gamma(),
                     t_exec - t_plan, t_done - t_exec);
        if (iterations > 0) std::fprintf(stderr, " cg_iterations=%zu", iterations);
        std::fprintf(stderr, " read_s=%.6f\n", t_plan - t_read);
        return kExitOk;
    }

    if (opt.type == "1" || opt.type == "inv1") {
        if (opt.inputs.size() != 2)
            return usage_error("--type " + opt.type + " needs --in FREQS.csv DATA.csv");
        const auto omega = read_frequencies(opt.inputs[0]);
        const auto data = read_complex_vector(opt.inputs[1]);

        if (opt.plain_fft) {
            const auto f = opt.type == "1" ? fft_forward(data) : fft_inverse(data);
            write_complex_vector(opt.out, f);
            std::fprintf(stderr, "plain fft path, N=%zu\n", data.size());
            return kExitOk;
        }

        const auto t_plan = detail::now_seconds();
        const Plan1 plan = plan_nufft1(omega, opt.eps);
        const auto t_exec = detail::now_seconds();
        ComplexVector result;
        std::size_t iterations = 0;
        if (opt.type == "1") {
            result = exec_nufft1(plan, data);
        } else {
            const CgReport report = inufft1(plan, data, opt.tol);
            if (!report.converged) {
                std::fprintf(stderr, "inv1: cg stalled at residual %.3e after %zu iterations\n",
                             report.relativeResidual, report.iterations);
                return kExitDomain;
            }
            result = report.solution;
            iterations = report.iterations;
        }
        const auto t_done = detail::now_seconds();
        write_complex_vector(opt.out, result);
        std::fprintf(stderr, "type=%s N=%zu K=%zu gamma=%.6g plan_s=%.6f online_s=%.6f",
                     opt.type.c_str(), plan.size(), plan.rank(), plan.gamma(),
                     t_exec - t_plan, t_done - t_exec);
        if (iterations > 0) std::fprintf(stderr, " cg_iterations=%zu", iterations);
        std::fprintf(stderr, "\n");
        return kExitOk;
    }

    if (opt.type == "3") {
        if (opt.inputs.size() != 3)
            return usage_error("--type 3 needs --in SAMPLES.csv FREQS.csv COEFFS.csv");
        const auto x = read_samples(opt.inputs[0]);
        const auto omega = read_frequencies(opt.inputs[1]);
        const auto c = read_complex_vector(opt.inputs[2]);

        const auto t_plan = detail::now_seconds();
        const Plan3 plan = plan_nufft3(x, omega, opt.eps);
        const auto t_exec = detail::now_seconds();
        const ComplexVector f = exec_nufft3(plan, c);
        const auto t_done = detail::now_seconds();
        write_complex_vector(opt.out, f);
        std::fprintf(stderr,
                     "type=3 N=%zu K=%zu effective_rank=%zu gamma=%.6g wraparound=%s "
                     "plan_s=%.6f online_s=%.6f\n",
                     plan.size(), plan.factorsA.rank, plan.effective_rank(),
                     plan.samples.gamma, plan.bTrivial ? "none" : "rank2",
                     t_exec - t_plan, t_done - t_exec);
        return kExitOk;
    }

    if (opt.type == "2d2") {
        if (opt.inputs.size() != 2)
            return usage_error("--type 2d2 needs --in SAMPLES2D.csv MATRIX.csv");
        std::vector<double> x, y;
        read_samples_2d(opt.inputs[0], x, y);
        const ComplexMatrix coeffs = read_complex_matrix(opt.inputs[1]);

        const auto t_plan = detail::now_seconds();
        const Plan2D plan = plan_nufft2d2(x, y, coeffs.rows, coeffs.cols, opt.eps);
        const auto t_exec = detail::now_seconds();
        const ComplexVector f = exec_nufft2d2(plan, coeffs);
        const auto t_done = detail::now_seconds();
        write_complex_vector(opt.out, f);
        std::fprintf(stderr,
                     "type=2d2 N=%zu m=%zu n=%zu K1=%zu K2=%zu gammaX=%.6g gammaY=%.6g "
                     "plan_s=%.6f online_s=%.6f\n",
                     plan.size(), plan.m, plan.n, plan.rank_x(), plan.rank_y(),
                     plan.grid.gammaX, plan.grid.gammaY, t_exec - t_plan, t_done - t_exec);
        return kExitOk;
    }

    return usage_error("unknown --type '" + opt.type + "' (use 1, 2, 3, 2d2, inv1, inv2)");
}

struct VerifyOptions {
    std::vector<std::size_t> n_list = {64, 256};
    std::vector<double> gamma_list = {0.0, 1.0 / 32, 1.0 / 8, 1.0 / 2};
    std::vector<double> eps_list = {2.2e-16, 1.2e-7, 9.8e-4};
    unsigned trials = 1;
    std::uint64_t seed = 1;
    std::string out;
    bool decay = false;  // coefficients with 1/k^2 decay instead of flat Gaussian
};

inline int run_verify(const VerifyOptions& opt) {
    std::ofstream csv(opt.out);
    if (!csv) {
        std::fprintf(stderr, "verify: cannot open %s for writing\n", opt.out.c_str());
        return kExitIo;
    }
    csv << "N,gamma,eps,K,rel_error,bound,pass\n";

    GaussianSampler rng(opt.seed);
    bool all_pass = true;
    for (std::size_t n : opt.n_list) {
        for (double gamma : opt.gamma_list) {
            const auto x = worst_grid(n, gamma);
            const auto omega = detail::integer_freqs(n);
            for (double eps : opt.eps_list) {
                const Plan2 plan = plan_nufft2(x, eps);
                for (unsigned trial = 0; trial < opt.trials; ++trial) {
                    ComplexVector c = rng.complex_vector(n);
                    if (opt.decay)
                        for (std::size_t k = 0; k < n; ++k)
                            c[k] /= static_cast<double>((k + 1) * (k + 1));
                    const ComplexVector fast = exec_nufft2(plan, c);
                    const ComplexVector exact = nudft_direct(x, omega, c);
                    const double rel = detail::rel_error_against(fast, exact, c);
                    const double bound = static_cast<double>(n) * eps;
                    const bool pass = rel <= bound;
                    all_pass = all_pass && pass;
                    char line[160];
                    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%zu,%.9e,%.9e,%d\n", n,
                                  gamma, eps, plan.rank(), rel, bound, pass ? 1 : 0);
                    csv << line;
                }
            }
        }
    }
    return all_pass ? kExitOk : kExitVerifyFail;
}

struct BenchOptions {
    std::vector<std::size_t> n_list = {1024, 4096, 16384};
    std::vector<double> eps_list = {2.2e-16};
    double gamma = 0.5;
    unsigned reps = 3;
    std::uint64_t seed = 1;
    std::string out;
};

inline int run_bench(const BenchOptions& opt) {
    std::ofstream csv(opt.out);
    if (!csv) {
        std::fprintf(stderr, "bench: cannot open %s for writing\n", opt.out.c_str());
        return kExitIo;
    }
    csv << "N,eps,K,plan_seconds,exec_seconds,fft_seconds_baseline,exec_over_fft_ratio\n";

    GaussianSampler rng(opt.seed);
    for (std::size_t n : opt.n_list) {
        const auto x = worst_grid(n, opt.gamma);
        const ComplexVector c = rng.complex_vector(n);
        for (double eps : opt.eps_list) {
            const double plan_s =
                detail::time_median([&] { (void)plan_nufft2(x, eps); }, opt.reps);
            const Plan2 plan = plan_nufft2(x, eps);
            const double exec_s =
                detail::time_median([&] { (void)exec_nufft2(plan, c); }, opt.reps);
            const double fft_s = detail::time_median([&] { (void)fft_forward(c); }, opt.reps);
            char line[200];
            std::snprintf(line, sizeof line, "%zu,%.17g,%zu,%.6e,%.6e,%.6e,%.3f\n", n, eps,
                          plan.rank(), plan_s, exec_s, fft_s, exec_s / fft_s);
            csv << line;
        }
    }
    return kExitOk;
}

struct CgStudyOptions {
    std::vector<std::size_t> n_list = {256, 1024};
    std::vector<double> gamma_list = {0.0, 1.0 / 32, 1.0 / 8, 7.0 / 16};
    double tol = 2.2e-14;
    double eps = 2.2e-16;
    unsigned trials = 5;
    std::uint64_t seed = 1;
    std::string out;
};

inline int run_cgstudy(const CgStudyOptions& opt) {
    std::ofstream csv(opt.out);
    if (!csv) {
        std::fprintf(stderr, "cgstudy: cannot open %s for writing\n", opt.out.c_str());
        return kExitIo;
    }
    csv << "N,gamma,iterations,converged\n";

    GaussianSampler rng(opt.seed);
    for (std::size_t n : opt.n_list) {
        for (double gamma : opt.gamma_list) {
            if (!(gamma < 0.5)) {
                std::fprintf(stderr, "cgstudy: gamma must be < 1/2\n");
                return kExitDomain;
            }
            for (unsigned trial = 0; trial < opt.trials; ++trial) {
                const auto x = gamma == 0.0 ? worst_grid(n, 0.0)
                                            : detail::perturbed_grid(n, gamma, rng);
                const Plan2 plan = plan_nufft2(x, opt.eps);
                const ToeplitzOperator op = toeplitz_from_normal(plan);
                const ComplexVector f = rng.complex_vector(n);
                const CgReport report = inufft2(plan, op, f, opt.tol);
                char line[96];
                std::snprintf(line, sizeof line, "%zu,%.17g,%zu,%d\n", n, gamma,
                              report.iterations, report.converged ? 1 : 0);
                csv << line;
            }
        }
    }
    return kExitOk;
}

}  // namespace nufft::app
