#include "grotto/variety.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace grotto::kernels {

// Horner in double precision, four x values per lane group. Exact while p < 2^26.
__attribute__((target("avx2"))) uint32_t count_roots_avx2(const int64_t* coeffs, const uint8_t* is_eq, int npoly,
                                                           int deg, int64_t p) {
    if (p >= (int64_t(1) << 26)) return count_roots_scalar(coeffs, is_eq, npoly, deg, p);
    const int stride = deg + 1;
    const __m256d P = _mm256_set1_pd(static_cast<double>(p));
    const __m256d invP = _mm256_set1_pd(1.0 / static_cast<double>(p));
    const __m256d zero = _mm256_setzero_pd();
    const __m256d step = _mm256_set1_pd(4.0);
    __m256d xv = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    uint32_t n = 0;
    for (int64_t x = 0; x < p; x += 4) {
        int lanes = p - x >= 4 ? 0xF : (1 << (p - x)) - 1;
        int ok = lanes;
        for (int i = 0; i < npoly && ok; ++i) {
            const int64_t* c = coeffs + i * stride;
            __m256d acc = _mm256_set1_pd(static_cast<double>(c[deg]));
            for (int k = deg - 1; k >= 0; --k) {
                acc = _mm256_add_pd(_mm256_mul_pd(acc, xv), _mm256_set1_pd(static_cast<double>(c[k])));
                __m256d qt = _mm256_floor_pd(_mm256_mul_pd(acc, invP));
                acc = _mm256_sub_pd(acc, _mm256_mul_pd(qt, P));
                acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_cmp_pd(acc, zero, _CMP_LT_OQ), P));
                acc = _mm256_sub_pd(acc, _mm256_and_pd(_mm256_cmp_pd(acc, P, _CMP_GE_OQ), P));
            }
            int zmask = _mm256_movemask_pd(_mm256_cmp_pd(acc, zero, _CMP_EQ_OQ));
            ok &= is_eq[i] ? zmask : ~zmask;
        }
        n += __builtin_popcount(ok & lanes);
        xv = _mm256_add_pd(xv, step);
    }
    return n;
}

}  // namespace grotto::kernels

#else

namespace grotto::kernels {

uint32_t count_roots_avx2(const int64_t* coeffs, const uint8_t* is_eq, int npoly, int deg, int64_t p) {
    return count_roots_scalar(coeffs, is_eq, npoly, deg, p);
}

}  // namespace grotto::kernels

#endif
