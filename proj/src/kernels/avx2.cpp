#include "torus/kernels.hpp"

#include <immintrin.h>

namespace torus::kernels::avx2 {

bool available() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

// Four interleaved partial products, one per lane, merged at the end.
__attribute__((target("avx2,fma"))) std::complex<double> complex_product(const double* re, const double* im,
                                                                         std::size_t n) {
    __m256d pr = _mm256_set1_pd(1.0);
    __m256d pi = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d cr = _mm256_loadu_pd(re + k);
        __m256d ci = _mm256_loadu_pd(im + k);
        __m256d nr = _mm256_fmsub_pd(pr, cr, _mm256_mul_pd(pi, ci));
        pi = _mm256_fmadd_pd(pr, ci, _mm256_mul_pd(pi, cr));
        pr = nr;
    }
    alignas(32) double lr[4], li[4];
    _mm256_store_pd(lr, pr);
    _mm256_store_pd(li, pi);
    std::complex<double> out(lr[0], li[0]);
    for (int l = 1; l < 4; ++l) out *= std::complex<double>(lr[l], li[l]);
    for (; k < n; ++k) out *= std::complex<double>(re[k], im[k]);
    return out;
}

__attribute__((target("avx2,fma"))) std::complex<double> complex_dot(const double* are, const double* aim,
                                                                     const double* bre, const double* bim,
                                                                     std::size_t n) {
    __m256d sr = _mm256_setzero_pd();
    __m256d si = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d ar = _mm256_loadu_pd(are + k), ai = _mm256_loadu_pd(aim + k);
        __m256d br = _mm256_loadu_pd(bre + k), bi = _mm256_loadu_pd(bim + k);
        sr = _mm256_fmadd_pd(ar, br, sr);
        sr = _mm256_fnmadd_pd(ai, bi, sr);
        si = _mm256_fmadd_pd(ar, bi, si);
        si = _mm256_fmadd_pd(ai, br, si);
    }
    alignas(32) double lr[4], li[4];
    _mm256_store_pd(lr, sr);
    _mm256_store_pd(li, si);
    double r = (lr[0] + lr[1]) + (lr[2] + lr[3]);
    double i = (li[0] + li[1]) + (li[2] + li[3]);
    for (; k < n; ++k) {
        r += are[k] * bre[k] - aim[k] * bim[k];
        i += are[k] * bim[k] + aim[k] * bre[k];
    }
    return {r, i};
}

}  // namespace torus::kernels::avx2
