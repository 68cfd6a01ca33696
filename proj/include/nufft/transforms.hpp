#pragma once

// One-dimensional NUFFT types I, II, III. A plan carries everything that
// does not depend on the coefficient vector (gamma, grid assignment, the
// low-rank factors, the FFT plan); execution is K diagonally-scaled FFTs
// merged in ascending r order, so repeated runs are bit-identical.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <thread>
#include <vector>

#include "nufft/fft.hpp"
#include "nufft/lowrank.hpp"
#include "nufft/oracle.hpp"

namespace nufft {

/// Normalized samples with their nearest-grid-node assignment.
/// Invariants: x in [0,1), |N*x_j - s_j| <= 1/2, t_j = mod(s_j, N),
/// gamma = max_j |N*x_j - s_j|.
struct SampleSet {
    std::vector<double> x;
    std::vector<long> s;
    std::vector<std::size_t> t;
    double gamma = 0.0;

    std::size_t size() const { return x.size(); }
};

/// Reduce arbitrary reals into [0, 1) by periodicity.
inline std::vector<double> normalize_samples(const std::vector<double>& raw) {
    std::vector<double> out(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) {
        if (!std::isfinite(raw[j]))
            throw std::invalid_argument("normalize_samples: sample is not finite");
        double v = raw[j] - std::floor(raw[j]);
        if (v >= 1.0) v = 0.0;  // tiny negatives can round up to exactly 1
        out[j] = v;
    }
    return out;
}

struct GridAssignment {
    std::vector<long> s;
    std::vector<std::size_t> t;
    double gamma = 0.0;
};

/// Nearest-node assignment on a grid of the given size: s = round(size*x)
/// (ties away from zero), t = mod(s, size), gamma = max |size*x - s|.
namespace detail {

// N*x_j - s_j without the rounding of the N*x product (exact via FMA);
// for grids that are not powers of two the plain product loses up to
// log2(N) bits, which the low-rank factors would inherit.
inline double exact_perturbation(double grid_size, double x, double s) {
    const double p = grid_size * x;
    const double err = std::fma(grid_size, x, -p);
    return (p - s) + err;
}

// Samples within representation error of the nodes count as uniform: node
// k/N stored as a double sits up to ~N*eps/4 off the exact rational, and
// the rank-1 path at such gamma still meets the N*eps error contract
// (entrywise 2*pi*gamma <= 0.8*N*eps).
inline double snap_gamma(double gamma, double grid_size) {
    constexpr double quarter_eps = 0x1p-54;
    return gamma <= grid_size * quarter_eps ? 0.0 : gamma;
}

}  // namespace detail

inline GridAssignment grid_assign(const std::vector<double>& x, std::size_t grid_size) {
    if (grid_size < 1) throw std::invalid_argument("grid_assign: grid size must be >= 1");
    GridAssignment out;
    out.s.resize(x.size());
    out.t.resize(x.size());
    const double dn = static_cast<double>(grid_size);
    for (std::size_t j = 0; j < x.size(); ++j) {
        const long s = static_cast<long>(std::round(dn * x[j]));
        out.s[j] = s;
        out.t[j] = static_cast<std::size_t>(s % static_cast<long>(grid_size));
        out.gamma = std::max(out.gamma, std::abs(detail::exact_perturbation(
                                            dn, x[j], static_cast<double>(s))));
    }
    out.gamma = detail::snap_gamma(out.gamma, dn);
    return out;
}

inline SampleSet make_sample_set(const std::vector<double>& raw, std::size_t grid_size) {
    SampleSet set;
    set.x = normalize_samples(raw);
    GridAssignment assign = grid_assign(set.x, grid_size);
    set.s = std::move(assign.s);
    set.t = std::move(assign.t);
    set.gamma = assign.gamma;
    return set;
}

/// Type-II plan: nonuniform samples, integer frequencies 0..N-1.
struct Plan2 {
    SampleSet samples;
    double epsilon = 0.0;
    LowRankFactors factors;
    std::shared_ptr<detail::FftPlan> fft;

    std::size_t size() const { return samples.size(); }
    std::size_t rank() const { return factors.rank; }
    double gamma() const { return samples.gamma; }
};

namespace detail {

inline void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::domain_error("epsilon must be in (0, 1)");
}

inline std::vector<double> perturbations(const SampleSet& set, std::size_t grid_size) {
    std::vector<double> delta(set.size());
    const double dn = static_cast<double>(grid_size);
    for (std::size_t j = 0; j < set.size(); ++j)
        delta[j] = exact_perturbation(dn, set.x[j], static_cast<double>(set.s[j]));
    return delta;
}

}  // namespace detail

inline Plan2 plan_nufft2(const std::vector<double>& x_raw, double epsilon) {
    if (x_raw.empty()) throw std::invalid_argument("plan_nufft2: no samples");
    detail::check_epsilon(epsilon);
    const std::size_t n = x_raw.size();
    Plan2 plan;
    plan.samples = make_sample_set(x_raw, n);
    plan.epsilon = epsilon;
    std::vector<double> omega_scaled(n);
    for (std::size_t k = 0; k < n; ++k)
        omega_scaled[k] = static_cast<double>(k) / static_cast<double>(n);
    plan.factors = build_factors(detail::perturbations(plan.samples, n), plan.samples.gamma,
                                 omega_scaled, epsilon);
    plan.fft = fft_plan_for(n);
    return plan;
}

namespace detail {

// One term of the factor sum: f += u_r .* gather_t(F(v_r .* c)).
inline void accumulate_term(const Plan2& plan, const ComplexVector& c, std::size_t r,
                            ComplexVector& scratch_in, ComplexVector& scratch_out,
                            ComplexVector& f) {
    const std::size_t n = plan.size();
    const ComplexVector& vr = plan.factors.v[r];
    for (std::size_t k = 0; k < n; ++k) scratch_in[k] = vr[k] * c[k];
    plan.fft->forward(scratch_in.data(), scratch_out.data());
    const ComplexVector& ur = plan.factors.u[r];
    for (std::size_t j = 0; j < n; ++j) f[j] += ur[j] * scratch_out[plan.samples.t[j]];
}

}  // namespace detail

/// Type-II execution: f ~ F2~ c with ||f - f_exact||_2 <= N*eps*||c||_2.
/// With threads > 1 the K terms are split into contiguous ranges computed
/// in parallel and merged in ascending order (fixed summation order).
inline ComplexVector exec_nufft2(const Plan2& plan, const ComplexVector& c,
                                 unsigned threads = 1) {
    const std::size_t n = plan.size();
    if (c.size() != n) throw std::invalid_argument("exec_nufft2: length mismatch");
    const std::size_t k = plan.rank();

    if (threads <= 1 || k == 1) {
        ComplexVector f(n, Complex(0, 0)), win(n), wout(n);
        for (std::size_t r = 0; r < k; ++r)
            detail::accumulate_term(plan, c, r, win, wout, f);
        return f;
    }

    const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(k));
    std::vector<ComplexVector> partial(workers, ComplexVector(n, Complex(0, 0)));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t lo = k * w / workers;
            const std::size_t hi = k * (w + 1) / workers;
            ComplexVector win(n), wout(n);
            for (std::size_t r = lo; r < hi; ++r)
                detail::accumulate_term(plan, c, r, win, wout, partial[w]);
        });
    }
    for (auto& th : pool) th.join();
    ComplexVector f = std::move(partial[0]);
    for (unsigned w = 1; w < workers; ++w)
        for (std::size_t j = 0; j < n; ++j) f[j] += partial[w][j];
    return f;
}

namespace detail {

// Transpose core shared by type I and the type-II adjoint:
//   F2~^T g = sum_r v_r .* (F^T scatter_t(u_r .* g)),
// F^T applied through the backward transform (F^T W = conj(backward(conj(W)))).
inline ComplexVector exec_transpose_core(const Plan2& plan, const ComplexVector& g) {
    const std::size_t n = plan.size();
    if (g.size() != n) throw std::invalid_argument("nufft transpose: length mismatch");
    ComplexVector f(n, Complex(0, 0)), scatter(n), work(n);
    for (std::size_t r = 0; r < plan.rank(); ++r) {
        const ComplexVector& ur = plan.factors.u[r];
        std::fill(scatter.begin(), scatter.end(), Complex(0, 0));
        for (std::size_t j = 0; j < n; ++j)
            scatter[plan.samples.t[j]] += ur[j] * g[j];  // duplicate bins add
        for (std::size_t i = 0; i < n; ++i) scatter[i] = std::conj(scatter[i]);
        plan.fft->backward_raw(scatter.data(), work.data());
        const ComplexVector& vr = plan.factors.v[r];
        for (std::size_t i = 0; i < n; ++i) f[i] += vr[i] * std::conj(work[i]);
    }
    return f;
}

}  // namespace detail

/// Conjugate-transpose multiply F2~* f, via the transpose machinery.
inline ComplexVector exec_nufft2_adjoint(const Plan2& plan, const ComplexVector& f) {
    ComplexVector g(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) g[j] = std::conj(f[j]);
    ComplexVector out = detail::exec_transpose_core(plan, g);
    for (auto& z : out) z = std::conj(z);
    return out;
}

/// Type-I plan: equispaced samples j/N, noninteger frequencies in [0, N].
/// The scaled frequencies act as the nonuniform samples of an inner
/// type-II plan; the type-I matrix is that plan's transpose.
struct Plan1 {
    std::vector<double> freqs;
    Plan2 inner;

    std::size_t size() const { return freqs.size(); }
    std::size_t rank() const { return inner.rank(); }
    double gamma() const { return inner.gamma(); }
};

inline Plan1 plan_nufft1(const std::vector<double>& omega, double epsilon) {
    if (omega.empty()) throw std::invalid_argument("plan_nufft1: no frequencies");
    detail::check_epsilon(epsilon);
    const std::size_t n = omega.size();
    const double dn = static_cast<double>(n);
    std::vector<double> scaled(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(omega[k]) || omega[k] < 0.0 || omega[k] > dn)
            throw std::invalid_argument("plan_nufft1: frequency outside [0, N]");
        scaled[k] = omega[k] / dn;
    }

    Plan1 plan;
    plan.freqs = omega;
    Plan2& inner = plan.inner;
    inner.epsilon = epsilon;
    // The inner samples are omega/N, but grid data comes from omega
    // directly: omega - round(omega) is exact, while N*(omega/N) - s
    // would carry the division rounding into every phase.
    inner.samples.x = normalize_samples(scaled);
    inner.samples.s.resize(n);
    inner.samples.t.resize(n);
    std::vector<double> delta(n);
    double gamma = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const long s = static_cast<long>(std::round(omega[k]));
        inner.samples.s[k] = s;
        inner.samples.t[k] = static_cast<std::size_t>(s % static_cast<long>(n));
        delta[k] = omega[k] - static_cast<double>(s);
        gamma = std::max(gamma, std::abs(delta[k]));
    }
    inner.samples.gamma = detail::snap_gamma(gamma, dn);

    std::vector<double> omega_scaled(n);
    for (std::size_t k = 0; k < n; ++k)
        omega_scaled[k] = static_cast<double>(k) / dn;
    inner.factors = build_factors(delta, gamma, omega_scaled, epsilon);
    inner.fft = fft_plan_for(n);
    return plan;
}

inline ComplexVector exec_nufft1(const Plan1& plan, const ComplexVector& c) {
    return detail::exec_transpose_core(plan.inner, c);
}

namespace detail {

// F1~* g = conj(F2~ conj(g)) on the inner plan.
inline ComplexVector exec_nufft1_adjoint(const Plan1& plan, const ComplexVector& g) {
    ComplexVector tmp(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) tmp[j] = std::conj(g[j]);
    ComplexVector out = exec_nufft2(plan.inner, tmp);
    for (auto& z : out) z = std::conj(z);
    return out;
}

}  // namespace detail

/// Type-III plan: nonuniform samples and frequencies. The correction matrix
/// factors combine with a rank-2 wraparound matrix B; when no sample is
/// assigned to the node at 1 (s = t everywhere) B is all ones and the
/// effective rank stays at K.
struct Plan3 {
    SampleSet samples;
    std::vector<double> freqs;
    LowRankFactors factorsA;
    bool bTrivial = true;
    std::vector<ComplexVector> combinedU;
    std::vector<ComplexVector> combinedV;
    Plan1 inner;

    std::size_t size() const { return samples.size(); }
    std::size_t effective_rank() const { return combinedU.size(); }
};

inline Plan3 plan_nufft3(const std::vector<double>& x_raw, const std::vector<double>& omega,
                         double epsilon) {
    if (x_raw.size() != omega.size())
        throw std::invalid_argument("plan_nufft3: sample/frequency length mismatch");
    if (x_raw.empty()) throw std::invalid_argument("plan_nufft3: no samples");
    detail::check_epsilon(epsilon);
    const std::size_t n = x_raw.size();
    const double dn = static_cast<double>(n);
    for (double w : omega)
        if (!std::isfinite(w) || w < 0.0 || !(w < dn))
            throw std::invalid_argument("plan_nufft3: frequency outside [0, N)");

    Plan3 plan;
    plan.samples = make_sample_set(x_raw, n);
    plan.freqs = omega;

    std::vector<double> omega_scaled(n);
    for (std::size_t k = 0; k < n; ++k) omega_scaled[k] = omega[k] / dn;
    plan.factorsA = build_factors(detail::perturbations(plan.samples, n), plan.samples.gamma,
                                  omega_scaled, epsilon);

    std::vector<double> beta(n);
    bool trivial = true;
    for (std::size_t j = 0; j < n; ++j) {
        beta[j] = static_cast<double>(plan.samples.s[j] -
                                      static_cast<long>(plan.samples.t[j])) / dn;
        trivial = trivial && beta[j] == 0.0;
    }
    plan.bTrivial = trivial;

    const std::size_t k = plan.factorsA.rank;
    if (trivial) {
        plan.combinedU = plan.factorsA.u;
        plan.combinedV = plan.factorsA.v;
    } else {
        // B = (1 - beta) 1^T + beta e^T with e_k = e^{-2*pi*i*omega_k}
        ComplexVector e(n);
        for (std::size_t i = 0; i < n; ++i)
            e[i] = detail::unit_phase_product(omega[i], 1.0);
        plan.combinedU.reserve(2 * k);
        plan.combinedV.reserve(2 * k);
        for (std::size_t r = 0; r < k; ++r) {
            ComplexVector u = plan.factorsA.u[r];
            for (std::size_t j = 0; j < n; ++j) u[j] *= 1.0 - beta[j];
            plan.combinedU.push_back(std::move(u));
            plan.combinedV.push_back(plan.factorsA.v[r]);
        }
        for (std::size_t r = 0; r < k; ++r) {
            ComplexVector u = plan.factorsA.u[r];
            for (std::size_t j = 0; j < n; ++j) u[j] *= beta[j];
            ComplexVector v = plan.factorsA.v[r];
            for (std::size_t i = 0; i < n; ++i) v[i] *= e[i];
            plan.combinedU.push_back(std::move(u));
            plan.combinedV.push_back(std::move(v));
        }
    }

    plan.inner = plan_nufft1(omega, epsilon);
    return plan;
}

inline ComplexVector exec_nufft3(const Plan3& plan, const ComplexVector& c) {
    const std::size_t n = plan.size();
    if (c.size() != n) throw std::invalid_argument("exec_nufft3: length mismatch");
    ComplexVector f(n, Complex(0, 0)), scaled(n);
    for (std::size_t q = 0; q < plan.effective_rank(); ++q) {
        const ComplexVector& u = plan.combinedU[q];
        const ComplexVector& v = plan.combinedV[q];
        for (std::size_t i = 0; i < n; ++i) scaled[i] = v[i] * c[i];
        const ComplexVector y = exec_nufft1(plan.inner, scaled);
        for (std::size_t j = 0; j < n; ++j) f[j] += u[j] * y[plan.samples.t[j]];
    }
    return f;
}

}  // namespace nufft
