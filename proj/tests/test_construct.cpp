#include <gtest/gtest.h>

#include <cmath>

#include "plr/construct.hpp"
#include "plr/criterion.hpp"
#include "plr/reference_tables.hpp"

using namespace plr;

namespace {

Poly P(std::uint32_t b, const char* digits) { return Poly::parse(b, digits); }

DiscreteLogTable table_for(std::uint32_t b, int m) {
    return build_log_table(find_modulus(b, m, true), Poly::monomial(b, 1));
}

}  // namespace

TEST(Kernel, Example) {
    const auto k = build_a3_kernel(build_log_table(Modulus(P(2, "10011")), Poly::monomial(2, 1)), 0.5);
    const std::vector<double> expected = {1, 2, 4, 8, 2, 4, 8, 8, 4, 8, 4, 8, 8, 8, 8};
    EXPECT_EQ(k.a, expected);
    double sum = 0;
    for (double v : k.a) sum += v;
    EXPECT_EQ(sum, 85.0);
}

TEST(Kernel, RangeAndFirstEntry) {
    for (double alpha : {0.3, 0.5, 1.0}) {
        const auto k = build_a3_kernel(table_for(3, 4), alpha);
        EXPECT_EQ(k.a[0], 1.0);
        for (double v : k.a) {
            ASSERT_GE(v, 1.0);
            ASSERT_LE(v, std::pow(3.0, 2 * alpha * 3) * (1 + 1e-15));
        }
    }
}

TEST(CbcNaive, OneDimensionIsClosedForm) {
    const Modulus p = find_modulus(2, 6, false);
    const auto r = cbc_naive(p, 1, 1.0, WeightSequence::constant(1));
    EXPECT_EQ(r.gv[0], P(2, "1"));
    EXPECT_NEAR(r.per_dim_B[0], one_dim_closed_form({1.0, 2, 6}, 1.0), 1e-25);
}

TEST(CbcNaive, SecondComponentIsExhaustiveMinimum) {
    const Modulus p = find_modulus(2, 2, false);
    const auto gamma = WeightSequence::constant(1);
    const auto r = cbc_naive(p, 2, 0.5, gamma);
    for (std::uint64_t c = 1; c < 4; ++c) {
        const double B = criterion_B(generate_points(GeneratingVector(p, {P(2, "1"), Poly::from_encoding(2, c)})), 0.5, gamma);
        EXPECT_GE(B, r.per_dim_B[1] * (1 - 1e-14));
    }
}

TEST(CbcNaive, DominatedByBoundOnLambdaGrid) {
    const Modulus p = find_modulus(2, 3, false);
    const auto gamma = WeightSequence::constant(1);
    const auto r = cbc_naive(p, 3, 0.5, gamma);
    for (std::size_t d = 1; d <= 3; ++d)
        for (double l : lambda_grid(cbc_lambda_lower(0.5), 20))
            ASSERT_LE(r.per_dim_B[d - 1], cbc_bound({0.5, 2, 3}, gamma, d, l));
}

TEST(Korobov, OneDimensionTiesReturnSmallestEncoding) {
    const Modulus p = find_modulus(2, 3, false);
    const auto r = korobov_search(p, 1, 0.5, WeightSequence::constant(1));
    EXPECT_EQ(r.q, P(2, "1"));
    EXPECT_NEAR(r.B, one_dim_closed_form({0.5, 2, 3}, 1.0), 1e-16);
}

TEST(Korobov, NeverBeatsCbc) {
    const Modulus p = find_modulus(2, 3, false);
    const auto gamma = WeightSequence::constant(1);
    const auto kor = korobov_search(p, 2, 1.0, gamma);
    const auto cbc = cbc_naive(p, 2, 1.0, gamma);
    EXPECT_GE(kor.B, cbc.per_dim_B[1] * (1 - 1e-14));
    EXPECT_NEAR(kor.B, criterion_B(generate_points(kor.gv), 1.0, gamma), 1e-15);
}

TEST(Korobov, DominatedByBound) {
    for (std::uint32_t b : {2U, 3U}) {
        const Modulus p = find_modulus(b, 4, false);
        const auto gamma = WeightSequence::polynomial(2);
        const auto r = korobov_search(p, 4, 1.0, gamma);
        for (double l : lambda_grid(korobov_lambda_lower(1.0), 20))
            ASSERT_LE(r.B, korobov_bound({1.0, b, 4}, gamma, 4, l));
    }
}

TEST(CbcFast, MatchesNaiveOnReferenceExample) {
    const Modulus p(P(2, "10011"));
    const auto table = build_log_table(p, Poly::monomial(2, 1));
    for (double alpha : {0.5, 1.0}) {
        const auto fast = cbc_fast(table, 5, alpha, WeightSequence::constant(1));
        const auto naive = cbc_naive(p, 5, alpha, WeightSequence::constant(1), &table);
        EXPECT_EQ(fast.trace, (std::vector<std::uint64_t>{0, 6, 3, 8, 9}));
        EXPECT_EQ(fast.trace, naive.trace);
        for (std::size_t d = 0; d < 5; ++d) {
            EXPECT_EQ(fast.gv[d], naive.gv[d]);
            EXPECT_NEAR(fast.per_dim_B[d], naive.per_dim_B[d], 1e-12 * naive.per_dim_B[d]);
        }
    }
}

TEST(CbcFast, FirstComponentIsOne) {
    const auto r = cbc_fast(table_for(3, 3), 3, 0.5, WeightSequence::geometric(0.875));
    EXPECT_EQ(r.trace[0], 0U);
    EXPECT_EQ(r.gv[0], P(3, "1"));
}

TEST(CbcFast, EquivalenceGrid) {
    for (std::uint32_t b : {2U, 3U})
        for (int m = 1; m <= 5; ++m) {
            const auto table = table_for(b, m);
            for (const char* w : {"const:1", "geom:0.875", "poly:2"}) {
                const auto gamma = WeightSequence::parse(w);
                for (double alpha : {0.5, 1.0}) {
                    const auto fast = cbc_fast(table, 5, alpha, gamma);
                    const auto naive = cbc_naive(table.modulus(), 5, alpha, gamma, &table);
                    ASSERT_EQ(fast.trace, naive.trace) << b << " " << m << " " << w << " " << alpha;
                    for (std::size_t d = 0; d < 5; ++d)
                        ASSERT_NEAR(fast.per_dim_B[d], naive.per_dim_B[d], 1e-12 * naive.per_dim_B[d]);
                }
            }
        }
}

TEST(CbcFast, TransformPathMatchesDirectPath) {
    // m = 10 exceeds the direct threshold; forcing the threshold up keeps it direct.
    const auto table = table_for(2, 10);
    const auto gamma = WeightSequence::polynomial(2);
    const auto fft = cbc_fast(table, 12, 1.0, gamma);
    CbcFastOptions direct;
    direct.fft_threshold = 1U << 20;
    const auto dir = cbc_fast(table, 12, 1.0, gamma, direct);
    EXPECT_EQ(fft.trace, dir.trace);
    for (std::size_t d = 0; d < 12; ++d) EXPECT_NEAR(fft.per_dim_B[d], dir.per_dim_B[d], 1e-12 * dir.per_dim_B[d]);
}

TEST(CbcFast, PerDimensionValuesAreTrueCriteria) {
    const auto table = table_for(2, 11);
    const auto gamma = WeightSequence::geometric(0.875);
    const auto r = cbc_fast(table, 8, 0.5, gamma);
    for (std::size_t d = 1; d <= 8; ++d) {
        std::vector<Poly> prefix(r.gv.q().begin(), r.gv.q().begin() + static_cast<std::ptrdiff_t>(d));
        const double B = criterion_B(generate_points(GeneratingVector(table.modulus(), prefix)), 0.5, gamma);
        ASSERT_NEAR(r.per_dim_B[d - 1], B, 1e-12 * B);
    }
    CbcFastOptions verify;
    verify.verify = true;
    EXPECT_NO_THROW(cbc_fast(table, 8, 0.5, gamma, verify));
}

TEST(CbcFast, MonotoneInDimension) {
    const auto r = cbc_fast(table_for(2, 9), 20, 0.5, WeightSequence::polynomial(2));
    for (std::size_t d = 1; d < r.per_dim_B.size(); ++d) ASSERT_GE(r.per_dim_B[d], r.per_dim_B[d - 1]);
}

TEST(CbcFast, OneDimensionalRate) {
    for (double alpha : {0.5, 1.0})
        for (int m = 2; m < 14; ++m) {
            const double a = cbc_fast(table_for(2, m), 1, alpha, WeightSequence::constant(1)).per_dim_B[0];
            const double c = cbc_fast(table_for(2, m + 1), 1, alpha, WeightSequence::constant(1)).per_dim_B[0];
            ASSERT_NEAR(std::log2(a / c), 2 * alpha + 1, 1e-12);
        }
}

TEST(CbcFast, RejectsNonPrimitive) {
    const Modulus p(P(2, "11111"));
    EXPECT_THROW(cbc_fast(p, 2, 0.5, WeightSequence::constant(1)), std::invalid_argument);
    EXPECT_THROW(cbc_fast(find_modulus(2, 4, true), 2, 0.5, WeightSequence::constant(1), P(2, "1")),
                 std::invalid_argument);
    EXPECT_NO_THROW(cbc_fast(find_modulus(2, 4, true), 2, 0.5, WeightSequence::constant(1), P(2, "11")));
}

TEST(CbcFast, TableOneFiveDimensionalColumn) {
    // Printed values for b = 2, alpha = 0.5, gamma = 1, s = 5. Only m = 8
    // differs at three digits (4.21e-02 vs 4.24e-02); the modulus used for the
    // printed table is not known.
    for (int m = 4; m <= 10; ++m) {
        const double B = cbc_fast(table_for(2, m), 5, 0.5, WeightSequence::constant(1)).per_dim_B[4];
        const auto ref = reference_cell(1, 0.5, 5, m);
        char shown[16];
        std::snprintf(shown, sizeof shown, "%.2e", B);
        if (m != 8) EXPECT_EQ(std::string(shown), ref.top_text) << m;
        EXPECT_NEAR(B / ref.top, 1.0, 0.25) << m;
    }
}
