#pragma once

// Inverse transforms. The type-II normal matrix F2~* F2~ is Hermitian
// Toeplitz, so a length-2N circulant embedding gives a matvec costing one
// forward and one backward FFT; conjugate gradients on the normal equations
// does the rest. The type-I inverse works on the Gram matrix F1~ F1~*.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "nufft/fft.hpp"
#include "nufft/transforms.hpp"

namespace nufft {

/// Hermitian Toeplitz operator stored as the eigenvalues of its length-2N
/// circulant embedding. firstColumn is kept for diagnostics.
struct ToeplitzOperator {
    std::size_t n = 0;
    ComplexVector spectrum;     // length 2n, imaginary parts truncated to 0
    ComplexVector firstColumn;  // length n
    std::shared_ptr<detail::FftPlan> fft;
};

namespace detail {

// Embed a Hermitian Toeplitz first column into a 2N circulant:
// (h_0, ..., h_{N-1}, 0, conj(h_{N-1}), ..., conj(h_1)). The pad entry is
// irrelevant (the extended coordinates are zeroed) and 0 keeps the symbol
// Hermitian, so the spectrum is real.
inline ToeplitzOperator toeplitz_from_first_column(ComplexVector column) {
    ToeplitzOperator op;
    op.n = column.size();
    const std::size_t n2 = 2 * op.n;
    ComplexVector symbol(n2, Complex(0, 0));
    for (std::size_t j = 0; j < op.n; ++j) symbol[j] = column[j];
    for (std::size_t j = 1; j < op.n; ++j) symbol[n2 - j] = std::conj(column[j]);
    ComplexVector spectrum = fft_forward(symbol);
    for (auto& z : spectrum) z = Complex(z.real(), 0.0);
    op.spectrum = std::move(spectrum);
    op.firstColumn = std::move(column);
    op.fft = fft_plan_for(n2);
    return op;
}

}  // namespace detail

/// Normal-equation operator F2~* F2~ of a type-II plan, first column
/// obtained by applying the fast forward and adjoint transforms to e_0.
inline ToeplitzOperator toeplitz_from_normal(const Plan2& plan) {
    ComplexVector e0(plan.size(), Complex(0, 0));
    e0[0] = Complex(1, 0);
    return detail::toeplitz_from_first_column(exec_nufft2_adjoint(plan, exec_nufft2(plan, e0)));
}

/// Gram operator F1~ F1~* of a type-I plan (also Hermitian Toeplitz).
inline ToeplitzOperator toeplitz_from_gram(const Plan1& plan) {
    ComplexVector e0(plan.size(), Complex(0, 0));
    e0[0] = Complex(1, 0);
    return detail::toeplitz_from_first_column(
        exec_nufft1(plan, detail::exec_nufft1_adjoint(plan, e0)));
}

/// Fast Toeplitz multiply: zero-pad to 2N, multiply in the spectral
/// domain, truncate back to N.
inline ComplexVector toeplitz_matvec(const ToeplitzOperator& op, const ComplexVector& v) {
    if (v.size() != op.n) throw std::invalid_argument("toeplitz_matvec: length mismatch");
    const std::size_t n2 = 2 * op.n;
    ComplexVector padded(n2, Complex(0, 0));
    for (std::size_t j = 0; j < op.n; ++j) padded[j] = v[j];
    ComplexVector spec(n2);
    op.fft->forward(padded.data(), spec.data());
    for (std::size_t j = 0; j < n2; ++j) spec[j] *= op.spectrum[j].real();
    ComplexVector back(n2);
    op.fft->backward_raw(spec.data(), back.data());
    ComplexVector out(op.n);
    const double scale = 1.0 / static_cast<double>(n2);
    for (std::size_t j = 0; j < op.n; ++j) out[j] = back[j] * scale;
    return out;
}

/// Conjugate-gradient outcome. On non-convergence `converged` is false and
/// `solution` carries the best iterate with its residual.
struct CgReport {
    ComplexVector solution;
    std::size_t iterations = 0;
    double relativeResidual = 0.0;
    bool converged = false;
    std::vector<double> residualHistory;  // relative residual after each iteration
};

namespace detail {

inline double norm2(const ComplexVector& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline double dot_real(const ComplexVector& a, const ComplexVector& b) {
    // real part of the Hermitian inner product sum conj(a) b
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        s += a[j].real() * b[j].real() + a[j].imag() * b[j].imag();
    return s;
}

}  // namespace detail

/// Plain CG for a Hermitian positive (semi)definite operator, Hermitian
/// inner product, relative-residual stopping rule.
template <typename Operator>
CgReport cg_solve(Operator&& apply, const ComplexVector& rhs, double tol,
                  std::size_t max_iter) {
    if (!(tol > 0.0)) throw std::domain_error("cg_solve: tol must be positive");
    const std::size_t n = rhs.size();
    CgReport report;
    report.solution.assign(n, Complex(0, 0));

    const double rhs_norm = detail::norm2(rhs);
    if (rhs_norm == 0.0) {
        report.converged = true;
        return report;
    }

    ComplexVector r = rhs;
    ComplexVector p = r;
    double rho = detail::dot_real(r, r);
    for (std::size_t it = 1; it <= max_iter; ++it) {
        const ComplexVector ap = apply(p);
        const double denom = detail::dot_real(p, ap);
        if (denom <= 0.0) break;  // operator lost definiteness at roundoff level
        const double alpha = rho / denom;
        for (std::size_t j = 0; j < n; ++j) {
            report.solution[j] += alpha * p[j];
            r[j] -= alpha * ap[j];
        }
        const double rho_next = detail::dot_real(r, r);
        report.iterations = it;
        report.relativeResidual = std::sqrt(rho_next) / rhs_norm;
        report.residualHistory.push_back(report.relativeResidual);
        if (report.relativeResidual <= tol) {
            report.converged = true;
            return report;
        }
        const double beta = rho_next / rho;
        for (std::size_t j = 0; j < n; ++j) p[j] = r[j] + beta * p[j];
        rho = rho_next;
    }
    report.relativeResidual = std::sqrt(rho) / rhs_norm;
    return report;
}

namespace detail {

inline std::size_t default_cg_max_iter(std::size_t n) {
    const auto sqrt_n = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    return std::max<std::size_t>(100, 4 * sqrt_n);
}

}  // namespace detail

/// Inverse type II: solve F2~ c = f through CG on F2~* F2~ c = F2~* f with
/// the cached Toeplitz operator. Requires gamma < 1/2 (at gamma = 1/2 the
/// samples may not be distinct and the system can be singular).
inline CgReport inufft2(const Plan2& plan, const ToeplitzOperator& op,
                        const ComplexVector& f, double tol) {
    if (f.size() != plan.size()) throw std::invalid_argument("inufft2: length mismatch");
    if (!(plan.gamma() < 0.5))
        throw std::domain_error("inufft2: gamma >= 1/2, samples may not be distinct");
    const ComplexVector rhs = exec_nufft2_adjoint(plan, f);
    return cg_solve([&op](const ComplexVector& v) { return toeplitz_matvec(op, v); }, rhs,
                    tol, detail::default_cg_max_iter(plan.size()));
}

inline CgReport inufft2(const Plan2& plan, const ComplexVector& f, double tol) {
    return inufft2(plan, toeplitz_from_normal(plan), f, tol);
}

/// Inverse type I: solve (F1~ F1~*) y = f by CG, then c = F1~* y.
inline CgReport inufft1(const Plan1& plan, const ToeplitzOperator& op,
                        const ComplexVector& f, double tol) {
    if (f.size() != plan.size()) throw std::invalid_argument("inufft1: length mismatch");
    if (!(plan.gamma() < 0.5))
        throw std::domain_error("inufft1: gamma >= 1/2, frequencies may not be distinct");
    CgReport report = cg_solve(
        [&op](const ComplexVector& v) { return toeplitz_matvec(op, v); }, f, tol,
        detail::default_cg_max_iter(plan.size()));
    report.solution = detail::exec_nufft1_adjoint(plan, report.solution);
    return report;
}

inline CgReport inufft1(const Plan1& plan, const ComplexVector& f, double tol) {
    return inufft1(plan, toeplitz_from_gram(plan), f, tol);
}

}  // namespace nufft
