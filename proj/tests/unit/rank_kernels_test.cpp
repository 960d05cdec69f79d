#include "apisum/rank_kernels.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <vector>

#include "apisum/textrank.hpp"

namespace apisum::kernels {
namespace {

std::vector<Isa> available() {
    std::vector<Isa> out;
    for (const auto isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
        if (is_supported(isa)) out.push_back(isa);
    }
    return out;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

TEST(RankKernels, ScalarAlwaysAvailable) {
    EXPECT_TRUE(is_supported(Isa::kScalar));
    EXPECT_EQ(get(Isa::kScalar).isa, Isa::kScalar);
    EXPECT_TRUE(is_supported(active().isa));
}

TEST(RankKernels, UnsupportedVariantThrows) {
    for (const auto isa : {Isa::kAvx2, Isa::kNeon}) {
        if (!is_supported(isa)) EXPECT_THROW(get(isa), std::invalid_argument);
    }
}

TEST(RankKernels, PropagateMatchesDefinition) {
    const std::vector<double> t = {0.0, 1.0, 0.0, 1.0 / 3, 0.0, 2.0 / 3, 0.0, 1.0, 0.0};
    const std::vector<double> s = {1.0, 2.0, 3.0};
    std::vector<double> out(3);
    for (const auto isa : available()) {
        propagate(get(isa), t, s, 0.85, out);
        EXPECT_NEAR(out[0], 0.15 + 0.85 * (2.0 / 3), 1e-15) << to_string(isa);
        EXPECT_NEAR(out[1], 0.15 + 0.85 * 4.0, 1e-15) << to_string(isa);
        EXPECT_NEAR(out[2], 0.15 + 0.85 * (4.0 / 3), 1e-15) << to_string(isa);
    }
}

TEST(RankKernels, ShapeMismatchThrows) {
    std::vector<double> out(2);
    EXPECT_THROW(propagate(get(Isa::kScalar), std::vector<double>(3), std::vector<double>(2), 0.85, out),
                 std::invalid_argument);
    EXPECT_THROW(max_abs_diff(get(Isa::kScalar), std::vector<double>(3), std::vector<double>(2)),
                 std::invalid_argument);
}

// Every variant must reproduce the scalar reference bit for bit, including
// the tail lanes, for sizes on both sides of the vector width.
TEST(RankKernels, VariantsBitIdenticalToScalar) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto& ref = get(Isa::kScalar);
    for (std::size_t n = 1; n <= 37; ++n) {
        std::vector<double> t(n * n), s(n), a(n), b(n), c(n);
        for (auto& x : t) x = u(rng);
        for (auto& x : s) x = 2.0 * u(rng);
        for (auto& x : c) x = u(rng);
        ref.propagate(t.data(), n, s.data(), 0.85, a.data());
        const double ref_diff = ref.max_abs_diff(a.data(), c.data(), n);
        for (const auto isa : available()) {
            const auto& k = get(isa);
            k.propagate(t.data(), n, s.data(), 0.85, b.data());
            EXPECT_TRUE(bit_equal(a, b)) << to_string(isa) << " n=" << n;
            EXPECT_EQ(k.max_abs_diff(a.data(), c.data(), n), ref_diff) << to_string(isa) << " n=" << n;
        }
    }
}

TEST(RankKernels, RankIdenticalAcrossVariants) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> w(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng() % 24;
        SentenceGraph g(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng() % 2) g.set_weight(i, j, w(rng));
        const auto ref = rank(g, {}, get(Isa::kScalar));
        for (const auto isa : available()) {
            const auto r = rank(g, {}, get(isa));
            EXPECT_TRUE(bit_equal(ref.scores, r.scores)) << to_string(isa);
            EXPECT_EQ(ref.iterations, r.iterations);
        }
    }
}

}  // namespace
}  // namespace apisum::kernels
