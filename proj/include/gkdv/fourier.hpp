#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "gkdv/types.hpp"

namespace gkdv {

namespace detail {
// FFTW planning is not thread-safe; execution of independent plans is.
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
} // namespace detail

/// Forward DFT (FFTW sign convention, unnormalized).
inline std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& in) {
    const auto n = in.size();
    std::vector<std::complex<double>> out(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        plan = fftw_plan_dft_1d(
            static_cast<int>(n),
            reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
            FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

inline std::vector<std::complex<double>> fft(const std::vector<double>& in) {
    std::vector<std::complex<double>> c(in.begin(), in.end());
    return fft(c);
}

/// Inverse DFT, normalized by 1/n.
inline std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& in) {
    const auto n = in.size();
    std::vector<std::complex<double>> out(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        plan = fftw_plan_dft_1d(
            static_cast<int>(n),
            reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
            reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
            FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : out) z *= inv;
    return out;
}

inline std::vector<double> ifft_real(const std::vector<std::complex<double>>& in) {
    auto c = ifft(in);
    std::vector<double> out(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) out[j] = c[j].real();
    return out;
}

/// Spectral derivative of given order on the periodic grid. For odd orders
/// the Nyquist mode is zeroed (its derivative has no real representation).
inline std::vector<double> spectral_derivative(const std::vector<double>& f, const Grid& g,
                                               int order = 1) {
    auto fh = fft(f);
    const auto xi = g.wavenumbers();
    for (std::size_t j = 0; j < g.n; ++j) {
        std::complex<double> factor = std::pow(std::complex<double>(0.0, xi[j]), order);
        fh[j] *= factor;
    }
    if (order % 2 != 0) fh[g.n / 2] = 0.0;
    return ifft_real(fh);
}

/// Exact off-grid translation f(x) -> f(x - delta) via Fourier phase shift.
inline std::vector<double> spectral_shift(const std::vector<double>& f, const Grid& g,
                                          double delta) {
    auto fh = fft(f);
    const auto xi = g.wavenumbers();
    for (std::size_t j = 0; j < g.n; ++j)
        fh[j] *= std::exp(std::complex<double>(0.0, -xi[j] * delta));
    fh[g.n / 2] = std::complex<double>(fh[g.n / 2].real() * std::cos(xi[g.n / 2] * delta), 0.0);
    return ifft_real(fh);
}

/// L2(dx) norm squared of the spectral derivative, ||d/dx f||^2.
inline double derivative_norm_sq(const std::vector<double>& f, const Grid& g) {
    auto fx = spectral_derivative(f, g, 1);
    double s = 0.0;
    for (double y : fx) s += y * y;
    return s * g.dx();
}

} // namespace gkdv
