// Built with -mavx2 only; callers must check CPU support first.
#include <immintrin.h>

#include <cmath>

#include "rank_kernels_internal.hpp"

namespace apisum::kernels::detail {

void propagate_avx2(const double* transition, std::size_t n, const double* scores, double damping, double* out) {
    const double base = 1.0 - damping;
    const __m256d vbase = _mm256_set1_pd(base);
    const __m256d vdamp = _mm256_set1_pd(damping);
    std::size_t i = 0;
    // Four output nodes per lane group; each lane runs the scalar j-loop.
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < n; ++j) {
            const __m256d col = _mm256_loadu_pd(transition + j * n + i);
            const __m256d s = _mm256_set1_pd(scores[j]);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(col, s));
        }
        _mm256_storeu_pd(out + i, _mm256_add_pd(vbase, _mm256_mul_pd(vdamp, acc)));
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

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d vmax = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        vmax = _mm256_max_pd(vmax, _mm256_andnot_pd(sign, d));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vmax);
    double m = 0.0;
    for (const double v : lanes) m = v > m ? v : m;
    for (; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

}  // namespace apisum::kernels::detail
