#include "featcomp/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace featcomp::kernels {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

constexpr Ops kNeon{dot_neon, axpy_neon};

}  // namespace

// Advanced SIMD is mandatory on AArch64.
const Ops* neon_ops() { return &kNeon; }

}  // namespace featcomp::kernels

#else

namespace featcomp::kernels {
const Ops* neon_ops() { return nullptr; }
}  // namespace featcomp::kernels

#endif
