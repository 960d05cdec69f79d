#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace apisum::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa);

// Raw-pointer signatures keep the per-ISA translation units free of
// library headers.
using PropagateFn = void (*)(const double* transition, std::size_t n, const double* scores,
                             double damping, double* out);
using MaxAbsDiffFn = double (*)(const double* a, const double* b, std::size_t n);

/// One ranking iteration and its convergence measure.
///
/// `propagate` computes, for every node i,
///     out[i] = (1 - d) + d * sum_j transition[j*n + i] * scores[j]
/// accumulating j in ascending order. Every variant performs the same
/// operations in the same order without fused multiply-add, so results are
/// bit-identical across ISAs.
struct RankKernels {
    Isa isa;
    PropagateFn propagate;
    MaxAbsDiffFn max_abs_diff;
};

bool is_supported(Isa isa);

/// Throws std::invalid_argument when `isa` is not available on this CPU/build.
const RankKernels& get(Isa isa);

/// Best available variant. `APISUM_KERNEL=scalar|avx2|neon` overrides the
/// choice when that variant is supported.
const RankKernels& active();

void propagate(const RankKernels& k, std::span<const double> transition, std::span<const double> scores,
               double damping, std::span<double> out);

double max_abs_diff(const RankKernels& k, std::span<const double> a, std::span<const double> b);

}  // namespace apisum::kernels
