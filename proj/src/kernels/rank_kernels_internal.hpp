#pragma once

#include "apisum/rank_kernels.hpp"

namespace apisum::kernels::detail {

void propagate_scalar(const double* transition, std::size_t n, const double* scores, double damping, double* out);
double max_abs_diff_scalar(const double* a, const double* b, std::size_t n);

#if defined(APISUM_HAVE_AVX2)
void propagate_avx2(const double* transition, std::size_t n, const double* scores, double damping, double* out);
double max_abs_diff_avx2(const double* a, const double* b, std::size_t n);
#endif

#if defined(APISUM_HAVE_NEON)
void propagate_neon(const double* transition, std::size_t n, const double* scores, double damping, double* out);
double max_abs_diff_neon(const double* a, const double* b, std::size_t n);
#endif

}  // namespace apisum::kernels::detail
