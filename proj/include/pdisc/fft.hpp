#pragma once

#include <utility>
#include <vector>

#include "pdisc/types.hpp"

namespace pdisc {

// In-place radix-2 FFT. sign = -1 gives X_k = sum_n x_n e^{-2pi i k n / N}
// (analysis), sign = +1 the conjugate transform without the 1/N factor.
inline void fft_inplace(std::vector<cplx>& a, int sign) {
    const size_t n = a.size();
    if (n < 2) return;
    if ((n & (n - 1)) != 0) throw PreconditionError("fft: size must be a power of two");
    // bit reversal
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = static_cast<double>(sign) * kTwoPi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Discrete Fourier coefficients of samples on the uniform circle grid:
// c_f = (1/N) sum_k samples[k] e^{-2pi i f k / N}, f = 0..N-1 (f and f-N alias).
inline std::vector<cplx> dft_coefficients(std::vector<cplx> samples) {
    const size_t n = samples.size();
    fft_inplace(samples, -1);
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& c : samples) c *= inv;
    return samples;
}

// Values at the uniform grid from spectral coefficients (inverse transform).
inline std::vector<cplx> dft_values(std::vector<cplx> coeffs) {
    fft_inplace(coeffs, +1);
    return coeffs;
}

// Signed frequency for DFT bin j of an N-point transform: j <= N/2 ? j : j-N.
inline long long dft_frequency(size_t j, size_t n) {
    return (j <= n / 2) ? static_cast<long long>(j) : static_cast<long long>(j) - static_cast<long long>(n);
}

}  // namespace pdisc
