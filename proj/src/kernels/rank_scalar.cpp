#include <cmath>

#include "rank_kernels_internal.hpp"

namespace apisum::kernels::detail {

void propagate_scalar(const double* transition, std::size_t n, const double* scores, double damping, double* out) {
    const double base = 1.0 - damping;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double term = transition[j * n + i] * scores[j];
            acc = acc + term;
        }
        const double scaled = damping * acc;
        out[i] = base + scaled;
    }
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

}  // namespace apisum::kernels::detail
