#include <gtest/gtest.h>
#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "plr/construct.hpp"
#include "plr/io.hpp"
#include "plr/scramble.hpp"

using namespace plr;

namespace {

PointSet cbc_points(int m, std::size_t s) {
    const auto table = build_log_table(find_modulus(2, m, true), Poly::monomial(2, 1));
    return generate_points(cbc_fast(table, s, 1.0, WeightSequence::polynomial(2)).gv);
}

// The b = 2, m = 2 one-dimensional net {0, 1/2, 1/4, 3/4}.
PointSet quarter_net() { return PointSet(2, 2, 1, {0, 2, 1, 3}); }

}  // namespace

TEST(Permutation, IsAPermutationForEveryBase) {
    for (std::uint32_t b : {2U, 3U, 5U, 7U})
        for (std::uint64_t key = 0; key < 200; ++key) {
            auto p = node_permutation(mix64(key), b);
            std::set<std::uint32_t> seen(p.begin(), p.end());
            ASSERT_EQ(seen.size(), b);
            ASSERT_EQ(*seen.rbegin(), b - 1);
        }
}

TEST(Permutation, AllOrdersAppearForBaseThree) {
    std::map<std::vector<std::uint32_t>, int> counts;
    for (std::uint64_t key = 0; key < 6000; ++key) ++counts[node_permutation(mix64(key), 3)];
    ASSERT_EQ(counts.size(), 6U);
    for (const auto& [perm, c] : counts) EXPECT_NEAR(c, 1000, 4 * std::sqrt(1000.0 * 5 / 6));
}

TEST(Scramble, FirstDigitOfZeroIsFair) {
    const PointSet pts(2, 1, 1, {0, 1});
    int ones = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) ones += owen_scramble(pts, {1, seed}).at(0, 0) >= 0.5;
    EXPECT_NEAR(ones, 5000, 3 * 50);
}

TEST(Scramble, SharedPrefixesStayShared) {
    const PointSet pts(3, 2, 1, {1, 2, 4, 0, 3, 5, 6, 7, 8});
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto y = owen_scramble(pts, {0, seed});
        EXPECT_EQ(std::floor(3 * y.at(0, 0)), std::floor(3 * y.at(1, 0)));
        EXPECT_NE(std::floor(9 * y.at(0, 0)), std::floor(9 * y.at(1, 0)));
        EXPECT_NE(std::floor(3 * y.at(0, 0)), std::floor(3 * y.at(2, 0)));
    }
}

TEST(Scramble, QuarterNetKeepsOnePointPerInterval) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto y = owen_scramble(quarter_net(), {0, seed});
        std::set<int> cells;
        for (std::size_t h = 0; h < 4; ++h) cells.insert(static_cast<int>(y.at(h, 0) * 4));
        ASSERT_EQ(cells.size(), 4U);
    }
}

TEST(Scramble, IdenticalPrefixesShareTail) {
    const PointSet twins(2, 2, 1, {3, 3, 1, 1});
    const auto y = owen_scramble(twins, {0, 11});
    EXPECT_EQ(y.at(0, 0), y.at(1, 0));
    EXPECT_EQ(y.at(2, 0), y.at(3, 0));
    EXPECT_NE(y.at(0, 0), y.at(2, 0));
}

TEST(Scramble, DeeperScramblingStaysInUnitCube) {
    const auto pts = cbc_points(6, 3);
    for (int depth : {6, 10, 40}) {
        const auto y = owen_scramble(pts, {depth, 5});
        for (double v : y.data()) {
            ASSERT_GE(v, 0.0);
            ASSERT_LT(v, 1.0);
        }
    }
    EXPECT_THROW(owen_scramble(pts, {5, 5}), std::invalid_argument);
}

TEST(Scramble, DeterministicAndThreadCountIndependent) {
    const auto pts = cbc_points(8, 5);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto serial = owen_scramble(pts, {0, 99}, 3);
    omp_set_num_threads(4);
    const auto parallel = owen_scramble(pts, {0, 99}, 3);
    omp_set_num_threads(saved);
    EXPECT_EQ(serial, parallel);
    EXPECT_EQ(serial, owen_scramble(pts, {0, 99}, 3));
    EXPECT_NE(serial, owen_scramble(pts, {0, 99}, 4));
    EXPECT_NE(serial, owen_scramble(pts, {0, 100}, 3));
}

TEST(Scramble, NetPreservationAtAllLevels) {
    const int m = 6;
    const std::size_t s = 3;
    const auto pts = cbc_points(m, s);
    auto counts = [&](auto box) {
        std::vector<std::vector<int>> all;
        for (int l1 = 0; l1 <= m; ++l1)
            for (int l2 = 0; l1 + l2 <= m; ++l2)
                for (int l3 = 0; l1 + l2 + l3 <= m; ++l3) {
                    std::map<std::array<std::uint64_t, 3>, int> c;
                    for (std::size_t h = 0; h < pts.size(); ++h) ++c[{box(h, 0, l1), box(h, 1, l2), box(h, 2, l3)}];
                    std::vector<int> v;
                    for (const auto& [k, n] : c) v.push_back(n);
                    std::sort(v.begin(), v.end());
                    all.push_back(v);
                }
        return all;
    };
    const auto ref = counts([&](std::size_t h, std::size_t j, int l) { return std::uint64_t{pts.at(h, j)} >> (m - l); });
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto y = owen_scramble(pts, {0, seed});
        ASSERT_EQ(ref, counts([&](std::size_t h, std::size_t j, int l) {
                      return static_cast<std::uint64_t>(std::ldexp(y.at(h, j), l));
                  })) << seed;
    }
}

TEST(Scramble, LevelTwoCellsAreUniformBaseThree) {
    // Chi-square with 8 degrees of freedom per coordinate; 0.001 / 27 level.
    const PointSet pts(3, 2, 1, {0, 1, 2, 3, 4, 5, 6, 7, 8});
    const int R = 10000;
    std::vector<std::array<int, 9>> hist(9, std::array<int, 9>{});
    for (int r = 0; r < R; ++r) {
        const auto y = owen_scramble(pts, {0, 31}, static_cast<std::uint64_t>(r));
        for (std::size_t h = 0; h < 9; ++h) ++hist[h][static_cast<std::size_t>(y.at(h, 0) * 9)];
    }
    for (const auto& c : hist) {
        double x2 = 0;
        for (int n : c) x2 += (n - R / 9.0) * (n - R / 9.0) / (R / 9.0);
        EXPECT_LT(x2, 36.0);  // upper 3.7e-5 quantile of chi-square(8) is about 35.9
    }
}

TEST(Estimate, Examples) {
    const auto c = make_integrand("const:2.5", 1);
    EXPECT_EQ(estimate(c, to_real(quarter_net())), 2.5);
    const Integrand x1{"x1", 1, [](std::span<const double> x) { return x[0]; }, 0.5};
    EXPECT_DOUBLE_EQ(estimate(x1, to_real(quarter_net())), 0.375);
    EXPECT_THROW(estimate(make_integrand("prodlin", 2), to_real(quarter_net())), std::invalid_argument);
}

TEST(Integrands, ExactIntegralsByQuadrature) {
    const int n = 2000;
    for (const auto& name : builtin_integrands()) {
        const auto f = make_integrand(name, 2);
        // Midpoint rule, 2000 x 200 grid.
        long double sum = 0;
        std::vector<double> x(2);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; k += 10) {
                x[0] = (i + 0.5) / n;
                x[1] = (k + 5.0) / n;
                sum += f(x);
            }
        EXPECT_NEAR(static_cast<double>(sum / (n * (n / 10))), f.exact, 2e-4) << name;
    }
    EXPECT_THROW(make_integrand("nope", 2), std::invalid_argument);
    EXPECT_THROW(make_integrand("holder:2,0.5", 2), std::invalid_argument);
    EXPECT_EQ(make_integrand("holder:0.25,0.5", 3).dimension, 3U);
}

TEST(Variance, ConstantHasZeroVariance) {
    const auto v = replicate_variance(make_integrand("const:3", 4), cbc_points(5, 4), 10, {0, 1});
    EXPECT_EQ(v.mean, 3.0);
    EXPECT_EQ(v.variance, 0.0);
    EXPECT_THROW(replicate_variance(make_integrand("const:3", 4), cbc_points(5, 4), 1, {0, 1}), std::invalid_argument);
}

TEST(Variance, UnbiasedForProductLinear) {
    const auto f = make_integrand("prodlin", 4);
    const auto v = replicate_variance(f, cbc_points(6, 4), 1000, {0, 2024});
    EXPECT_LE(std::abs(v.mean - 1.0), 3 * v.standard_error);
    EXPECT_EQ(v.estimates.size(), 1000U);
}

TEST(Variance, BeatsMonteCarloAtMEight) {
    for (const auto& name : builtin_integrands()) {
        const auto f = make_integrand(name, 5);
        const auto rqmc = replicate_variance(f, cbc_points(8, 5), 200, {0, 8});
        const auto mc = monte_carlo_variance(f, 256, 200, 8);
        EXPECT_LT(rqmc.variance, mc.variance) << name;
        EXPECT_LE(std::abs(mc.mean - 1.0), 4 * mc.standard_error) << name;
    }
}

TEST(Variance, DeterministicGivenSeed) {
    const auto f = make_integrand("prodquad", 3);
    const auto pts = cbc_points(5, 3);
    EXPECT_EQ(replicate_variance(f, pts, 20, {0, 3}).estimates, replicate_variance(f, pts, 20, {0, 3}).estimates);
}

TEST(Io, ScrambledExportHasFlagAndFullPrecision) {
    const auto y = owen_scramble(quarter_net(), {0, 1});
    std::ostringstream out;
    write_scrambled(out, y, 2);
    std::istringstream in(out.str());
    std::string b, m, s, flag;
    in >> b >> m >> s >> flag;
    EXPECT_EQ(flag, "scrambled");
    for (std::size_t h = 0; h < 4; ++h) {
        double v;
        in >> v;
        EXPECT_EQ(v, y.at(h, 0));
    }
}
