#ifndef SPHEREWAVE_DETAIL_FFT_HPP
#define SPHEREWAVE_DETAIL_FFT_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spherewave::detail {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place radix-2 DIT transform, sign = -1 forward / +1 inverse (inverse is
// unscaled). Twiddles are cached per length.
inline void fft_pow2(cplx* a, std::size_t n, int sign)
{
    if (!is_pow2(n)) throw std::invalid_argument("fft_pow2: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    struct Table {
        std::size_t n = 0;
        std::vector<cplx> w; // forward twiddles for half-length
    };
    thread_local Table tbl;
    if (tbl.n != n) {
        tbl.n = n;
        tbl.w.resize(n / 2);
        const double base = -2.0 * 3.14159265358979323846264338327950288 / static_cast<double>(n);
        for (std::size_t k = 0; k < n / 2; ++k)
            tbl.w[k] = std::polar(1.0, base * static_cast<double>(k));
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx w = tbl.w[k * stride];
                if (sign > 0) w = std::conj(w);
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

// Fourier coefficients of a trigonometric polynomial of degree <= deg given
// equispaced samples s[p] = f(2*pi*p/P), P a power of two with P >= 2*deg+1.
// Output is indexed out[deg + w] = c_w for w in [-deg, deg], where
// f(t) = sum_w c_w e^{i w t}. The sample buffer is destroyed.
inline void ring_coefficients(cplx* samples, std::size_t P, int deg, cplx* out)
{
    if (P < 2 * static_cast<std::size_t>(deg) + 1)
        throw std::invalid_argument("ring_coefficients: too few samples for degree");
    fft_pow2(samples, P, -1);
    const double inv = 1.0 / static_cast<double>(P);
    for (int w = -deg; w <= deg; ++w) {
        const std::size_t bin = static_cast<std::size_t>((w + static_cast<int>(P)) % static_cast<int>(P));
        out[deg + w] = samples[bin] * inv;
    }
}

} // namespace spherewave::detail

#endif
