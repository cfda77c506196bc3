#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "plr/circfft.hpp"
#include "plr/construct.hpp"

using namespace plr;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

double max_rel(const std::vector<double>& got, const std::vector<double>& want) {
    double scale = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        scale = std::max(scale, std::abs(want[i]));
        err = std::max(err, std::abs(got[i] - want[i]));
    }
    return err / scale;
}

ConvolutionPlan transform_plan(const CirculantKernel& k) { return {k, ConvolutionPlan::Strategy::transform}; }

}  // namespace

TEST(Radix2, MatchesNaiveDft) {
    std::mt19937_64 rng(1);
    for (std::size_t n : {1, 2, 8, 64}) {
        std::vector<std::complex<double>> x(n);
        for (auto& z : x) z = {random_vec(1, rng)[0], random_vec(1, rng)[0]};
        auto y = x;
        Radix2Fft(n).forward(y);
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> want = 0;
            for (std::size_t j = 0; j < n; ++j) want += x[j] * std::polar(1.0, -2 * M_PI * double(j * k % n) / double(n));
            ASSERT_LT(std::abs(y[k] - want), 1e-12);
        }
        Radix2Fft(n).inverse(y);
        for (std::size_t j = 0; j < n; ++j) ASSERT_LT(std::abs(y[j] / double(n) - x[j]), 1e-14);
    }
}

TEST(Bluestein, MatchesNaiveDftForOddLengths) {
    std::mt19937_64 rng(2);
    for (std::size_t n : {1, 3, 7, 15, 26, 242}) {
        std::vector<std::complex<double>> x(n);
        for (auto& z : x) z = {random_vec(1, rng)[0], random_vec(1, rng)[0]};
        const BluesteinDft dft(n);
        const auto y = dft.forward(x);
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> want = 0;
            for (std::size_t j = 0; j < n; ++j) want += x[j] * std::polar(1.0, -2 * M_PI * double(j * k % n) / double(n));
            ASSERT_LT(std::abs(y[k] - want), 1e-11);
        }
        const auto back = dft.inverse(y);
        for (std::size_t j = 0; j < n; ++j) ASSERT_LT(std::abs(back[j] / double(n) - x[j]), 1e-13);
    }
}

TEST(Circulant, IdentityAndAllOnesKernels) {
    std::mt19937_64 rng(3);
    for (std::size_t n : {1, 7, 600}) {
        const auto v = random_vec(n, rng);
        CirculantKernel id{std::vector<double>(n, 0.0)};
        id.a[0] = 1.0;
        EXPECT_LT(max_rel(circulant_matvec(id, v, plan_for(n, id)), v), 1e-13);
        EXPECT_LT(max_rel(transform_plan(id).apply(v), v), 1e-13);
        CirculantKernel ones{std::vector<double>(n, 1.0)};
        double sum = 0;
        for (double x : v) sum += x;
        EXPECT_LT(max_rel(transform_plan(ones).apply(v), std::vector<double>(n, sum)), 1e-12);
    }
}

TEST(Circulant, UnitVectorGivesKernelColumn) {
    const Modulus p(Poly::parse(2, "10011"));
    const auto k = build_a3_kernel(build_log_table(p, Poly::monomial(2, 1)), 0.5);
    std::vector<double> e0(15, 0.0);
    e0[0] = 1.0;
    EXPECT_EQ(circulant_matvec_direct(k.a, e0), k.a);
    EXPECT_LT(max_rel(transform_plan(k).apply(e0), k.a), 1e-14);
    std::vector<double> e3(15, 0.0);
    e3[3] = 1.0;
    const auto col = circulant_matvec_direct(k.a, e3);
    for (std::size_t i = 0; i < 15; ++i) EXPECT_EQ(col[i], k.a[(i + 15 - 3) % 15]);
}

TEST(Circulant, TransformAgreesWithDirect) {
    std::mt19937_64 rng(4);
    for (std::size_t n : {3, 7, 15, 31, 63, 242}) {
        const CirculantKernel k{random_vec(n, rng)};
        const auto plan = transform_plan(k);
        for (int t = 0; t < 100; ++t) {
            const auto v = random_vec(n, rng);
            ASSERT_LT(max_rel(plan.apply(v), circulant_matvec_direct(k.a, v)), 1e-10) << n;
        }
    }
}

TEST(Circulant, TransformAgreesWithExactIntegerKernel) {
    // For alpha = 1 the kernel entries 4^t are integers, so an integer
    // product with integer inputs is exact.
    for (int m : {4, 6, 8}) {
        const Modulus p = find_modulus(2, m, true);
        const auto k = build_a3_kernel(build_log_table(p, Poly::monomial(2, 1)), 1.0);
        const std::size_t n = k.size();
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = double((i * 7919) % 13);
        std::vector<double> exact(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::int64_t acc = 0;
            for (std::size_t j = 0; j < n; ++j)
                acc += static_cast<std::int64_t>(k.a[(i + n - j) % n]) * static_cast<std::int64_t>(v[j]);
            exact[i] = double(acc);
        }
        EXPECT_EQ(circulant_matvec_direct(k.a, v), exact);
        EXPECT_LT(max_rel(transform_plan(k).apply(v), exact), 1e-13);
    }
}

TEST(Circulant, Linearity) {
    std::mt19937_64 rng(5);
    for (std::size_t n : {15, 242, 1023}) {
        const CirculantKernel k{random_vec(n, rng)};
        const auto plan = plan_for(n, k);
        const auto a = random_vec(n, rng);
        const auto b = random_vec(n, rng);
        std::vector<double> combo(n), lin(n);
        const auto fa = plan.apply(a);
        const auto fb = plan.apply(b);
        for (std::size_t i = 0; i < n; ++i) {
            combo[i] = 2.5 * a[i] - 0.5 * b[i];
            lin[i] = 2.5 * fa[i] - 0.5 * fb[i];
        }
        EXPECT_LT(max_rel(plan.apply(combo), lin), 1e-12);
    }
}

TEST(Circulant, CompositionIsConvolutionOfKernels) {
    std::mt19937_64 rng(6);
    for (std::size_t n : {7, 63, 242}) {
        const CirculantKernel k1{random_vec(n, rng)};
        const CirculantKernel k2{random_vec(n, rng)};
        const CirculantKernel k12{circulant_matvec_direct(k2.a, k1.a)};
        const CirculantKernel k21{circulant_matvec_direct(k1.a, k2.a)};
        const auto v = random_vec(n, rng);
        const auto lhs = transform_plan(k2).apply(transform_plan(k1).apply(v));
        EXPECT_LT(max_rel(lhs, transform_plan(k12).apply(v)), 1e-12);
        EXPECT_LT(max_rel(k12.a, k21.a), 1e-13);  // circulants commute
    }
}

TEST(Plan, StrategySelection) {
    const CirculantKernel one{{1.0}};
    EXPECT_EQ(plan_for(1, one).strategy(), ConvolutionPlan::Strategy::direct);
    const CirculantKernel k15{std::vector<double>(15, 1.0)};
    EXPECT_EQ(plan_for(15, k15).strategy(), ConvolutionPlan::Strategy::direct);
    const CirculantKernel big{std::vector<double>(65535, 1.0)};
    EXPECT_EQ(plan_for(65535, big).strategy(), ConvolutionPlan::Strategy::transform);
}

TEST(Plan, LengthMismatchThrows) {
    const CirculantKernel k{std::vector<double>(7, 1.0)};
    const std::vector<double> v(6, 1.0);
    EXPECT_THROW(transform_plan(k).apply(v), std::invalid_argument);
    EXPECT_THROW(plan_for(7, k).apply(v), std::invalid_argument);
    EXPECT_THROW(circulant_matvec(k, v, plan_for(7, k)), std::invalid_argument);
}
