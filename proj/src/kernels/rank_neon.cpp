#include <arm_neon.h>

#include <cmath>

#include "rank_kernels_internal.hpp"

namespace apisum::kernels::detail {

void propagate_neon(const double* transition, std::size_t n, const double* scores, double damping, double* out) {
    const double base = 1.0 - damping;
    const float64x2_t vbase = vdupq_n_f64(base);
    const float64x2_t vdamp = vdupq_n_f64(damping);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t acc = vdupq_n_f64(0.0);
        for (std::size_t j = 0; j < n; ++j) {
            // vmulq + vaddq, not vfmaq: keeps rounding identical to scalar.
            acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(transition + j * n + i), vdupq_n_f64(scores[j])));
        }
        vst1q_f64(out + i, vaddq_f64(vbase, vmulq_f64(vdamp, acc)));
    }
    for (; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double term = transition[j * n + i] * scores[j];
            acc = acc + term;
        }
        const double scaled = damping * acc;
        out[i] = base + scaled;
    }
}

double max_abs_diff_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t vmax = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vmax = vmaxq_f64(vmax, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    double m = vmaxvq_f64(vmax);
    for (; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

}  // namespace apisum::kernels::detail
