#pragma once

// FFT adapter over FFTW3. Fixes the conventions the rest of the library
// assumes: forward = sum_k v_k e^{-2*pi*i*j*k/N} (unnormalized), inverse
// carries the 1/N factor. Arbitrary N is supported by the backend.
//
// Planning mutates FFTW's global planner and is serialized behind a mutex;
// executing a cached plan on caller-owned buffers is thread-safe.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace nufft {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Row-major complex matrix.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    ComplexVector data;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Complex& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

namespace detail {

inline void check_nonempty(std::size_t n, const char* what) {
    if (n == 0) throw std::invalid_argument(std::string(what) + ": empty input");
}

// Per-size forward/backward plan pair. Plans are created with
// FFTW_UNALIGNED so they can execute on any caller buffer.
class FftPlan {
  public:
    explicit FftPlan(std::size_t n) : n_(n) {
        std::vector<fftw_complex> dummy_in(n), dummy_out(n);
        const int in = static_cast<int>(n);
        forward_ = fftw_plan_dft_1d(in, dummy_in.data(), dummy_out.data(),
                                    FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        backward_ = fftw_plan_dft_1d(in, dummy_in.data(), dummy_out.data(),
                                     FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!forward_ || !backward_) throw std::runtime_error("fftw planning failed");
    }

    ~FftPlan() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t size() const { return n_; }

    // out_j = sum_k in_k e^{-2*pi*i*j*k/n}
    void forward(const Complex* in, Complex* out) const;

    // out_j = sum_k in_k e^{+2*pi*i*j*k/n}  (no 1/n)
    void backward_raw(const Complex* in, Complex* out) const;

  private:
    std::size_t n_;
    fftw_plan forward_;
    fftw_plan backward_;
};

struct FftRegistry {
    std::mutex mutex;
    std::map<std::size_t, std::shared_ptr<FftPlan>> plans;
    std::map<std::size_t, std::uint64_t> exec_counts;

    static FftRegistry& instance() {
        static FftRegistry reg;
        return reg;
    }
};

inline void count_exec(std::size_t n) {
    auto& reg = FftRegistry::instance();
    std::lock_guard<std::mutex> lock(reg.mutex);
    ++reg.exec_counts[n];
}

inline void FftPlan::forward(const Complex* in, Complex* out) const {
    fftw_execute_dft(forward_,
                     reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    count_exec(n_);
}

inline void FftPlan::backward_raw(const Complex* in, Complex* out) const {
    fftw_execute_dft(backward_,
                     reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    count_exec(n_);
}

}  // namespace detail

/// Fetch (or create) the shared plan for transforms of size n.
inline std::shared_ptr<detail::FftPlan> fft_plan_for(std::size_t n) {
    detail::check_nonempty(n, "fft_plan_for");
    auto& reg = detail::FftRegistry::instance();
    std::lock_guard<std::mutex> lock(reg.mutex);
    auto it = reg.plans.find(n);
    if (it != reg.plans.end()) return it->second;
    auto plan = std::make_shared<detail::FftPlan>(n);
    reg.plans.emplace(n, plan);
    return plan;
}

/// Number of 1D transforms of size n executed since the last reset. Test hook.
inline std::uint64_t fft_exec_count(std::size_t n) {
    auto& reg = detail::FftRegistry::instance();
    std::lock_guard<std::mutex> lock(reg.mutex);
    auto it = reg.exec_counts.find(n);
    return it == reg.exec_counts.end() ? 0 : it->second;
}

inline void fft_reset_exec_counts() {
    auto& reg = detail::FftRegistry::instance();
    std::lock_guard<std::mutex> lock(reg.mutex);
    reg.exec_counts.clear();
}

/// Unnormalized forward DFT: result_j = sum_k v_k e^{-2*pi*i*j*k/N}.
inline ComplexVector fft_forward(const ComplexVector& v) {
    detail::check_nonempty(v.size(), "fft_forward");
    ComplexVector out(v.size());
    fft_plan_for(v.size())->forward(v.data(), out.data());
    return out;
}

/// Inverse DFT with the 1/N factor: fft_inverse(fft_forward(v)) == v.
inline ComplexVector fft_inverse(const ComplexVector& v) {
    detail::check_nonempty(v.size(), "fft_inverse");
    const std::size_t n = v.size();
    ComplexVector out(n);
    fft_plan_for(n)->backward_raw(v.data(), out.data());
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& z : out) z *= scale;
    return out;
}

namespace detail {

// In-place forward DFT of every row of a row-major matrix (rows are contiguous).
inline void fft_rows_forward(ComplexMatrix& m) {
    auto plan = fft_plan_for(m.cols);
    for (std::size_t r = 0; r < m.rows; ++r) {
        Complex* row = m.data.data() + r * m.cols;
        plan->forward(row, row);
    }
}

// In-place forward DFT of every column (gathered through a scratch buffer).
inline void fft_cols_forward(ComplexMatrix& m) {
    auto plan = fft_plan_for(m.rows);
    ComplexVector in(m.rows), out(m.rows);
    for (std::size_t c = 0; c < m.cols; ++c) {
        for (std::size_t r = 0; r < m.rows; ++r) in[r] = m.at(r, c);
        plan->forward(in.data(), out.data());
        for (std::size_t r = 0; r < m.rows; ++r) m.at(r, c) = out[r];
    }
}

}  // namespace detail

/// 2D forward DFT of an m x n matrix:
///   out_atab = sum_{k1,k2} C_{k1,k2} e^{-2*pi*i*(k1*a/m + k2*b/n)}.
/// Columns are transformed first, then rows; the order does not matter.
inline ComplexMatrix fft_2d_forward(const ComplexMatrix& c) {
    detail::check_nonempty(c.rows * c.cols, "fft_2d_forward");
    if (c.data.size() != c.rows * c.cols)
        throw std::invalid_argument("fft_2d_forward: inconsistent dimensions");
    ComplexMatrix out = c;
    detail::fft_cols_forward(out);
    detail::fft_rows_forward(out);
    return out;
}

/// Column-major flattening: entry (r, c) lands at index rows*c + r.
inline ComplexVector vec_column_major(const ComplexMatrix& m) {
    ComplexVector out(m.rows * m.cols);
    for (std::size_t c = 0; c < m.cols; ++c)
        for (std::size_t r = 0; r < m.rows; ++r) out[m.rows * c + r] = m.at(r, c);
    return out;
}

}  // namespace nufft
