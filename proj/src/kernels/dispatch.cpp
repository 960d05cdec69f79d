#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rank_kernels_internal.hpp"

namespace apisum::kernels {

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::kScalar: return "scalar";
        case Isa::kAvx2: return "avx2";
        case Isa::kNeon: return "neon";
    }
    return "unknown";
}

namespace {

constexpr RankKernels kScalar{Isa::kScalar, detail::propagate_scalar, detail::max_abs_diff_scalar};
#if defined(APISUM_HAVE_AVX2)
constexpr RankKernels kAvx2{Isa::kAvx2, detail::propagate_avx2, detail::max_abs_diff_avx2};
#endif
#if defined(APISUM_HAVE_NEON)
constexpr RankKernels kNeon{Isa::kNeon, detail::propagate_neon, detail::max_abs_diff_neon};
#endif

const RankKernels& pick_best() {
    if (const char* forced = std::getenv("APISUM_KERNEL")) {
        for (const auto isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
            if (to_string(isa) == forced && is_supported(isa)) return get(isa);
        }
    }
    if (is_supported(Isa::kAvx2)) return get(Isa::kAvx2);
    if (is_supported(Isa::kNeon)) return get(Isa::kNeon);
    return kScalar;
}

}  // namespace

bool is_supported(Isa isa) {
    switch (isa) {
        case Isa::kScalar: return true;
        case Isa::kAvx2:
#if defined(APISUM_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::kNeon:
#if defined(APISUM_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const RankKernels& get(Isa isa) {
    if (!is_supported(isa)) {
        throw std::invalid_argument("rank kernel '" + std::string(to_string(isa)) + "' unavailable");
    }
    switch (isa) {
#if defined(APISUM_HAVE_AVX2)
        case Isa::kAvx2: return kAvx2;
#endif
#if defined(APISUM_HAVE_NEON)
        case Isa::kNeon: return kNeon;
#endif
        default: return kScalar;
    }
}

const RankKernels& active() {
    static const RankKernels& chosen = pick_best();
    return chosen;
}

void propagate(const RankKernels& k, std::span<const double> transition, std::span<const double> scores,
               double damping, std::span<double> out) {
    const auto n = scores.size();
    if (transition.size() != n * n || out.size() != n) {
        throw std::invalid_argument("propagate: shape mismatch");
    }
    k.propagate(transition.data(), n, scores.data(), damping, out.data());
}

double max_abs_diff(const RankKernels& k, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
    return k.max_abs_diff(a.data(), b.data(), a.size());
}

}  // namespace apisum::kernels
