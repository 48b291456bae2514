#include "qnnent/kernels.hpp"

#include <bit>

#if defined(QNNENT_HAVE_AVX2_TU)
#include <immintrin.h>

namespace qnnent::kernels::avx2 {

namespace {
inline const double *raw(std::span<const cplx> s) { return reinterpret_cast<const double *>(s.data()); }
inline double       *raw(std::span<cplx> s) { return reinterpret_cast<double *>(s.data()); }

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo         = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}
} // namespace

cplx inner_product(std::span<const cplx> a, std::span<const cplx> b) {
    const double *pa = raw(a);
    const double *pb = raw(b);
    std::size_t   n  = a.size();
    // acc_re lanes: ar*br, ai*bi ; acc_im lanes: ar*bi, ai*br
    __m256d     acc_re = _mm256_setzero_pd();
    __m256d     acc_im = _mm256_setzero_pd();
    std::size_t i      = 0;
    for(; i + 2 <= n; i += 2) {
        __m256d va  = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb  = _mm256_loadu_pd(pb + 2 * i);
        __m256d vbs = _mm256_permute_pd(vb, 0b0101);
        acc_re      = _mm256_fmadd_pd(va, vb, acc_re);
        acc_im      = _mm256_fmadd_pd(va, vbs, acc_im);
    }
    double re = hsum(acc_re);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc_im);
    double im = (lanes[0] + lanes[2]) - (lanes[1] + lanes[3]);
    for(; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

double norm_squared(std::span<const cplx> a) {
    const double *p   = raw(a);
    std::size_t   n   = 2 * a.size();
    __m256d       acc = _mm256_setzero_pd();
    std::size_t   i   = 0;
    for(; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(p + i);
        acc       = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for(; i < n; ++i) s += p[i] * p[i];
    return s;
}

void scale(std::span<cplx> a, double s) {
    double     *p  = raw(a);
    std::size_t n  = 2 * a.size();
    __m256d     vs = _mm256_set1_pd(s);
    std::size_t i  = 0;
    for(; i + 4 <= n; i += 4) _mm256_storeu_pd(p + i, _mm256_mul_pd(_mm256_loadu_pd(p + i), vs));
    for(; i < n; ++i) p[i] *= s;
}

void apply_z_parity(std::span<cplx> a, std::uint64_t zmask) {
    // Two amplitudes per register: indices 2k and 2k+1 differ only in bit 0, so the
    // sign pattern is fixed by (zmask & 1) and flipped wholesale by parity(2k & zmask).
    double       *p        = raw(a);
    std::uint64_t n        = a.size();
    const __m256d signbit  = _mm256_set1_pd(-0.0);
    const __m256d low_flip = (zmask & 1) ? _mm256_setr_pd(0.0, 0.0, -0.0, -0.0) : _mm256_setzero_pd();
    std::uint64_t i        = 0;
    for(; i + 2 <= n; i += 2) {
        __m256d v    = _mm256_loadu_pd(p + 2 * i);
        __m256d mask = low_flip;
        if(std::popcount(i & zmask) & 1) mask = _mm256_xor_pd(mask, signbit);
        _mm256_storeu_pd(p + 2 * i, _mm256_xor_pd(v, mask));
    }
    for(; i < n; ++i)
        if(std::popcount(i & zmask) & 1) a[i] = -a[i];
}

} // namespace qnnent::kernels::avx2

#else

#include <stdexcept>

namespace qnnent::kernels::avx2 {
cplx   inner_product(std::span<const cplx>, std::span<const cplx>) { throw std::logic_error("AVX2 kernels not built"); }
double norm_squared(std::span<const cplx>) { throw std::logic_error("AVX2 kernels not built"); }
void   scale(std::span<cplx>, double) { throw std::logic_error("AVX2 kernels not built"); }
void   apply_z_parity(std::span<cplx>, std::uint64_t) { throw std::logic_error("AVX2 kernels not built"); }
} // namespace qnnent::kernels::avx2

#endif
