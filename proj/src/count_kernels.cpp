#include <cstdlib>
#include <cstring>

#include "grotto/variety.hpp"

namespace grotto::kernels {

uint32_t count_roots_scalar(const int64_t* coeffs, const uint8_t* is_eq, int npoly, int deg, int64_t p) {
    const int stride = deg + 1;
    uint32_t n = 0;
    for (int64_t x = 0; x < p; ++x) {
        bool ok = true;
        for (int i = 0; i < npoly && ok; ++i) {
            const int64_t* c = coeffs + i * stride;
            int64_t acc = c[deg];
            for (int k = deg - 1; k >= 0; --k) acc = (acc * x + c[k]) % p;
            ok = (acc == 0) == static_cast<bool>(is_eq[i]);
        }
        n += ok;
    }
    return n;
}

#if defined(__ARM_NEON)
uint32_t count_roots_neon_impl(const int64_t* coeffs, const uint8_t* is_eq, int npoly, int deg, int64_t p);
#endif

uint32_t count_roots_neon(const int64_t* coeffs, const uint8_t* is_eq, int npoly, int deg, int64_t p) {
#if defined(__ARM_NEON)
    return count_roots_neon_impl(coeffs, is_eq, npoly, deg, p);
#else
    return count_roots_scalar(coeffs, is_eq, npoly, deg, p);
#endif
}

bool have_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

bool have_neon() {
#if defined(__ARM_NEON)
    return true;
#else
    return false;
#endif
}

namespace {

struct Choice {
    CountFn fn;
    const char* name;
};

Choice choose() {
    const char* env = std::getenv("GROTTO_SIMD");
    bool scalar = env && std::strcmp(env, "scalar") == 0;
    if (!scalar && have_avx2()) return {count_roots_avx2, "avx2"};
    if (!scalar && have_neon()) return {count_roots_neon, "neon"};
    return {count_roots_scalar, "scalar"};
}

const Choice& chosen() {
    static const Choice c = choose();
    return c;
}

}  // namespace

CountFn active() { return chosen().fn; }
const char* active_name() { return chosen().name; }

}  // namespace grotto::kernels
