#include "plr/criterion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace plr {

namespace {

constexpr std::size_t kBlockRows = 2048;

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("alpha must lie in (0, 1], got " + std::to_string(alpha));
}

DoubleDouble pairwise_sum(std::span<const DoubleDouble> parts) {
    if (parts.empty()) return {};
    if (parts.size() == 1) return parts[0];
    const auto half = parts.size() / 2;
    return pairwise_sum(parts.first(half)) + pairwise_sum(parts.subspan(half));
}

// factors[j * (m + 1) + a] = 1 + gamma_j (k0 - k1 beta^-a), a = 0 meaning x = 0.
std::vector<DoubleDouble> factor_table(const CriterionConstants& c, int m, std::span<const double> gamma) {
    const auto stride = static_cast<std::size_t>(m) + 1;
    std::vector<DoubleDouble> f(gamma.size() * stride);
    std::vector<DoubleDouble> inv_pow(stride);
    for (int a = 1; a <= m; ++a) inv_pow[static_cast<std::size_t>(a)] = c.inv_beta_pow(a);
    for (std::size_t j = 0; j < gamma.size(); ++j) {
        const DoubleDouble g(gamma[j]);
        f[j * stride] = DoubleDouble(1.0) + g * c.k0;
        for (std::size_t a = 1; a < stride; ++a) f[j * stride + a] = DoubleDouble(1.0) + g * (c.k0 - c.k1 * inv_pow[a]);
    }
    return f;
}

DoubleDouble block_sum(const PointSet& points, std::span<const DoubleDouble> factors, std::size_t begin,
                       std::size_t end) {
    const auto s = points.dimension();
    const auto b = points.base();
    const int m = points.m();
    const auto stride = static_cast<std::size_t>(m) + 1;
    DoubleDouble sum;
    for (std::size_t h = begin; h < end; ++h) {
        const auto row = points.row(h);
        DoubleDouble prod(1.0);
        for (std::size_t j = 0; j < s; ++j) {
            const auto a = static_cast<std::size_t>(leading_digit_position(row[j], b, m));
            prod *= factors[j * stride + a];
        }
        sum += prod;
    }
    return sum;
}

double finish(const PointSet& points, std::span<const DoubleDouble> partials) {
    const DoubleDouble total = pairwise_sum(partials);
    const double n = static_cast<double>(points.size());
    return ((total - DoubleDouble(n)) / DoubleDouble(n)).value();
}

}  // namespace

void CriterionParams::validate() const {
    check_alpha(alpha);
    if (b < 2 || !is_prime(b)) throw std::domain_error("base must be prime");
    if (m < 1) throw std::domain_error("m must be >= 1");
}

CriterionConstants::CriterionConstants(std::uint32_t base, double a) : b(base), alpha(a) {
    check_alpha(alpha);
    const double two_alpha = 2.0 * alpha;
    if (two_alpha == std::floor(two_alpha))
        beta = static_cast<double>(ipow(b, static_cast<unsigned>(two_alpha)));
    else
        beta = std::pow(static_cast<double>(b), two_alpha);
    const DoubleDouble bb(static_cast<double>(b));
    const DoubleDouble beta_minus_one = DoubleDouble(beta) - DoubleDouble(1.0);
    k0 = DoubleDouble(1.0) / beta_minus_one;
    k1 = (bb * DoubleDouble(beta) - DoubleDouble(1.0)) / ((bb - DoubleDouble(1.0)) * beta_minus_one);
}

DoubleDouble CriterionConstants::inv_beta_pow(int a) const {
    return DoubleDouble(1.0) / dd_pow(DoubleDouble(beta), static_cast<unsigned>(a));
}

int leading_digit_position(std::uint64_t numerator, std::uint32_t b, int m) {
    if (numerator == 0) return 0;
    int len = 0;
    if (b == 2) {
        len = static_cast<int>(std::bit_width(numerator));
    } else {
        for (std::uint64_t v = numerator; v != 0; v /= b) ++len;
    }
    return m - len + 1;
}

double phi_alpha(std::uint64_t numerator, const CriterionParams& params) {
    params.validate();
    const double b = params.b;
    const double beta = std::pow(b, 2.0 * params.alpha);
    const double denom = b * (beta - 1.0);
    if (numerator == 0) return (b - 1.0) / denom;
    const int a = leading_digit_position(numerator, params.b, params.m);
    // b^(2 alpha floor(log_b x)) with floor(log_b x) = -a.
    const double scale = std::pow(beta, -static_cast<double>(a));
    return (b - 1.0 - scale * (b * beta - 1.0)) / denom;
}

double criterion_B(const PointSet& points, double alpha, const WeightSequence& gamma) {
    const CriterionConstants c(points.base(), alpha);
    const auto weights = gamma.first(points.dimension());
    const auto factors = factor_table(c, points.m(), weights);
    const auto n = points.size();
    const auto n_blocks = (n + kBlockRows - 1) / kBlockRows;
    std::vector<DoubleDouble> partials(n_blocks);
    const auto nb = static_cast<long>(n_blocks);
#pragma omp parallel for schedule(static)
    for (long blk = 0; blk < nb; ++blk) {
        const auto begin = static_cast<std::size_t>(blk) * kBlockRows;
        partials[static_cast<std::size_t>(blk)] = block_sum(points, factors, begin, std::min(n, begin + kBlockRows));
    }
    return finish(points, partials);
}

double criterion_B_serial(const PointSet& points, double alpha, const WeightSequence& gamma) {
    const CriterionConstants c(points.base(), alpha);
    const auto weights = gamma.first(points.dimension());
    const auto factors = factor_table(c, points.m(), weights);
    const auto n = points.size();
    std::vector<DoubleDouble> partials;
    for (std::size_t begin = 0; begin < n; begin += kBlockRows)
        partials.push_back(block_sum(points, factors, begin, std::min(n, begin + kBlockRows)));
    return finish(points, partials);
}

double one_dim_closed_form(const CriterionParams& params, double gamma1) {
    params.validate();
    const double b = params.b;
    const double beta = std::pow(b, 2.0 * params.alpha);
    return gamma1 / ((beta - 1.0) * std::pow(b, (2.0 * params.alpha + 1.0) * params.m));
}

double r_weight(std::uint64_t k, std::uint32_t b, double alpha_prime, double gamma) {
    if (k == 0) return 1.0;
    int a = 0;
    for (std::uint64_t v = k; v != 0; v /= b) ++a;
    const double bd = b;
    return gamma * bd / ((bd - 1.0) * std::pow(bd, alpha_prime * a));
}

double r_weight(std::span<const std::uint64_t> k, std::uint32_t b, double alpha_prime, const WeightSequence& gamma) {
    double r = 1.0;
    for (std::size_t j = 0; j < k.size(); ++j) r *= r_weight(k[j], b, alpha_prime, gamma(j + 1));
    return r;
}

DualSum dual_sum_oracle(const GeneratingVector& gv, double alpha, const WeightSequence& gamma, int K) {
    check_alpha(alpha);
    const auto& p = gv.modulus();
    const int m = p.degree();
    if (K < m) throw std::invalid_argument("dual sum truncation K must be >= m");
    const auto b = p.base();
    const auto s = gv.dimension();
    const double log2_terms = static_cast<double>(K) * static_cast<double>(s) * std::log2(static_cast<double>(b));
    if (log2_terms > 28.0) throw std::length_error("dual sum oracle is limited to b^(K s) <= 2^28 terms");

    const auto box = ipow(b, static_cast<unsigned>(K));
    const auto residues = p.size();
    const auto mm = static_cast<std::size_t>(m);
    // res[j][t] = digits of tr_m(t)(x) q_j(x) mod p for t in [0, b^m).
    std::vector<std::vector<std::uint32_t>> res(s, std::vector<std::uint32_t>(residues * mm, 0U));
    for (std::size_t j = 0; j < s; ++j)
        for (std::uint64_t t = 0; t < residues; ++t) {
            const Poly w = poly_mul_mod(Poly::from_encoding(b, t), gv[j], p);
            for (std::size_t i = 0; i < mm; ++i) res[j][t * mm + i] = w.coeff(i);
        }
    std::vector<std::vector<double>> r(s, std::vector<double>(box));
    for (std::size_t j = 0; j < s; ++j)
        for (std::uint64_t k = 0; k < box; ++k) r[j][k] = r_weight(k, b, 2.0 * alpha + 1.0, gamma(j + 1));

    // Odometer over k in [0, b^K)^s.
    std::vector<std::uint64_t> k(s, 0);
    DoubleDouble total;
    std::vector<std::uint32_t> acc(mm);
    while (true) {
        std::fill(acc.begin(), acc.end(), 0U);
        bool nonzero = false;
        for (std::size_t j = 0; j < s; ++j) {
            nonzero = nonzero || k[j] != 0;
            const auto* d = &res[j][(k[j] % residues) * mm];
            for (std::size_t i = 0; i < mm; ++i) acc[i] = (acc[i] + d[i]) % b;
        }
        const bool member = std::all_of(acc.begin(), acc.end(), [](auto v) { return v == 0; });
        if (member && nonzero) {
            double term = 1.0;
            for (std::size_t j = 0; j < s; ++j) term *= r[j][k[j]];
            total += DoubleDouble(term);
        }
        std::size_t j = 0;
        while (j < s && ++k[j] == box) k[j++] = 0;
        if (j == s) break;
    }

    const double beta = std::pow(static_cast<double>(b), 2.0 * alpha);
    double tail = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
        double t = gamma(j + 1) * std::pow(beta, -static_cast<double>(K)) / (beta - 1.0);
        for (std::size_t i = 0; i < s; ++i)
            if (i != j) t *= 1.0 + gamma(i + 1) / (beta - 1.0);
        tail += t;
    }
    return {total.value(), tail};
}

double bound_constant(std::uint32_t b, double alpha, double lambda) {
    const double bd = b;
    const double first = std::pow(std::pow(bd, 2.0 * alpha) - 1.0, -lambda);
    const double second = std::pow(bd - 1.0, 1.0 - lambda) / (std::pow(bd, 2.0 * alpha * lambda) - std::pow(bd, 1.0 - lambda));
    return std::max(first, second);
}

double cbc_lambda_lower(double alpha) { return 1.0 / (2.0 * alpha + 1.0); }

double korobov_lambda_lower(double alpha) { return 1.0 / (2.0 * alpha); }

namespace {

double product_bound(const CriterionParams& params, const WeightSequence& gamma, std::size_t d, double lambda) {
    const double C = bound_constant(params.b, params.alpha, lambda);
    const double n1 = static_cast<double>(ipow(params.b, static_cast<unsigned>(params.m))) - 1.0;
    // Work in logs: the product overflows for large d and small lambda.
    double log_bound = -std::log(n1) / lambda;
    for (std::size_t j = 1; j <= d; ++j) log_bound += std::log1p(std::pow(gamma(j), lambda) * C) / lambda;
    return std::exp(log_bound);
}

void check_lambda(double lambda, double lo, const char* which) {
    if (!(lambda > lo && lambda <= 1.0))
        throw std::domain_error(std::string(which) + ": lambda must lie in (" + std::to_string(lo) + ", 1], got " +
                                std::to_string(lambda));
}

}  // namespace

double cbc_bound(const CriterionParams& params, const WeightSequence& gamma, std::size_t d, double lambda) {
    params.validate();
    check_lambda(lambda, cbc_lambda_lower(params.alpha), "cbc_bound");
    return product_bound(params, gamma, d, lambda);
}

double korobov_bound(const CriterionParams& params, const WeightSequence& gamma, std::size_t s, double lambda) {
    params.validate();
    check_lambda(lambda, korobov_lambda_lower(params.alpha), "korobov_bound");
    return std::pow(static_cast<double>(s), 1.0 / lambda) * product_bound(params, gamma, s, lambda);
}

std::vector<double> lambda_grid(double lo, std::size_t count) {
    std::vector<double> grid;
    if (lo >= 1.0 || count == 0) return grid;
    for (std::size_t i = 1; i <= count; ++i) grid.push_back(lo + (1.0 - lo) * static_cast<double>(i) / static_cast<double>(count));
    return grid;
}

bool jensen_transform_check(const PointSet& points, double alpha, double alpha_prime, const WeightSequence& gamma) {
    check_alpha(alpha);
    check_alpha(alpha_prime);
    if (alpha_prime < alpha) throw std::domain_error("jensen check needs alpha <= alpha'");
    const double power = (1.0 + 2.0 * alpha_prime) / (1.0 + 2.0 * alpha);
    const double lhs = std::pow(criterion_B(points, alpha, gamma), power);
    const double rhs = criterion_B(points, alpha_prime, power == 1.0 ? gamma : gamma.powered(power));
    return rhs <= lhs * (1.0 + 1e-12);
}

}  // namespace plr
