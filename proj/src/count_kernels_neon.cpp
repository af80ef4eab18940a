#if defined(__ARM_NEON)
#include <arm_neon.h>

#include "grotto/variety.hpp"

namespace grotto::kernels {

// Two x values per vector, same exactness bound as the AVX2 path.
uint32_t count_roots_neon_impl(const int64_t* coeffs, const uint8_t* is_eq, int npoly, int deg, int64_t p) {
    if (p >= (int64_t(1) << 26)) return count_roots_scalar(coeffs, is_eq, npoly, deg, p);
    const int stride = deg + 1;
    const float64x2_t P = vdupq_n_f64(static_cast<double>(p));
    const float64x2_t invP = vdupq_n_f64(1.0 / static_cast<double>(p));
    const float64x2_t zero = vdupq_n_f64(0.0);
    const double init[2] = {0.0, 1.0};
    float64x2_t xv = vld1q_f64(init);
    const float64x2_t step = vdupq_n_f64(2.0);
    uint32_t n = 0;
    for (int64_t x = 0; x < p; x += 2) {
        int lanes = p - x >= 2 ? 3 : 1;
        int ok = lanes;
        for (int i = 0; i < npoly && ok; ++i) {
            const int64_t* c = coeffs + i * stride;
            float64x2_t acc = vdupq_n_f64(static_cast<double>(c[deg]));
            for (int k = deg - 1; k >= 0; --k) {
                acc = vaddq_f64(vmulq_f64(acc, xv), vdupq_n_f64(static_cast<double>(c[k])));
                float64x2_t qt = vrndmq_f64(vmulq_f64(acc, invP));
                acc = vsubq_f64(acc, vmulq_f64(qt, P));
                acc = vbslq_f64(vcltq_f64(acc, zero), vaddq_f64(acc, P), acc);
                acc = vbslq_f64(vcgeq_f64(acc, P), vsubq_f64(acc, P), acc);
            }
            uint64x2_t z = vceqq_f64(acc, zero);
            int zmask = (vgetq_lane_u64(z, 0) ? 1 : 0) | (vgetq_lane_u64(z, 1) ? 2 : 0);
            ok &= is_eq[i] ? zmask : ~zmask;
        }
        n += __builtin_popcount(ok & lanes);
        xv = vaddq_f64(xv, step);
    }
    return n;
}

}  // namespace grotto::kernels
#endif
