#pragma once

// The quality criterion B(q, alpha, gamma): an upper bound on the worst-case
// variance of the scrambled estimator, for product weights gamma_j.
//
//   B = -1 + b^-m sum_h prod_j (1 + b/(b-1) gamma_j phi_alpha(x_{h,j}))
//
// with phi_alpha depending only on the position of the first nonzero base-b
// digit of x. The same formula scores any digital net given its points.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "plr/dd.hpp"
#include "plr/pointset.hpp"
#include "plr/weights.hpp"

namespace plr {

struct CriterionParams {
    double alpha;
    std::uint32_t b;
    int m;

    /// Throws std::domain_error unless 0 < alpha <= 1, b prime and m >= 1.
    void validate() const;
};

/// Constants of the per-coordinate factor, in double-double precision.
///
/// For a coordinate whose first nonzero digit sits at position a (x in
/// [b^-a, b^-a+1)), b/(b-1) phi_alpha(x) = k0 - k1 * beta^-a with
/// beta = b^(2 alpha); for x = 0 it is k0.
struct CriterionConstants {
    CriterionConstants(std::uint32_t b, double alpha);

    std::uint32_t b;
    double alpha;
    double beta;           // b^(2 alpha), rounded once; everything else derives from it
    DoubleDouble k0;       // 1 / (beta - 1)
    DoubleDouble k1;       // (b beta - 1) / ((b - 1)(beta - 1))

    /// beta^-a for a >= 0.
    DoubleDouble inv_beta_pow(int a) const;
};

/// Position a in [1, m] of the first nonzero base-b digit of n / b^m, or 0
/// for n = 0.
int leading_digit_position(std::uint64_t numerator, std::uint32_t b, int m);

/// phi_alpha(n / b^m), evaluated from the digit position (no logarithms).
double phi_alpha(std::uint64_t numerator, const CriterionParams& params);

/// Parallel over points with a fixed block partition and a pairwise
/// reduction of block sums, so the result does not depend on thread count.
/// Throws std::domain_error for alpha outside (0, 1].
double criterion_B(const PointSet& points, double alpha, const WeightSequence& gamma);

/// Single-threaded reference; bit-identical to criterion_B.
double criterion_B_serial(const PointSet& points, double alpha, const WeightSequence& gamma);

/// gamma_1 / ((b^(2 alpha) - 1) b^((2 alpha + 1) m)): the criterion of every
/// one-dimensional polynomial lattice rule.
double one_dim_closed_form(const CriterionParams& params, double gamma1);

/// r(0) = 1, r(k) = gamma b / ((b - 1) b^(alpha' a)) for a k with a digits.
double r_weight(std::uint64_t k, std::uint32_t b, double alpha_prime, double gamma);
double r_weight(std::span<const std::uint64_t> k, std::uint32_t b, double alpha_prime,
                const WeightSequence& gamma);

struct DualSum {
    double value;
    double tail_bound;
};

/// Direct sum of r_{2 alpha + 1, gamma}(k) over the nonzero dual lattice
/// vectors with every k_j < b^K, plus a bound on the omitted mass.
/// Throws std::invalid_argument for K < m and std::length_error when b^(K s)
/// is too large to enumerate.
DualSum dual_sum_oracle(const GeneratingVector& gv, double alpha, const WeightSequence& gamma, int K);

/// C_{b, alpha, lambda} = max((b^2a - 1)^-l, (b - 1)^(1-l) / (b^(2 a l) - b^(1-l))).
double bound_constant(std::uint32_t b, double alpha, double lambda);

/// Admissible lambda interval (lo, 1] of each bound.
double cbc_lambda_lower(double alpha);
double korobov_lambda_lower(double alpha);

/// (b^m - 1)^(-1/l) prod_{j<=d} (1 + gamma_j^l C)^(1/l). Throws
/// std::domain_error for lambda outside (1/(2 alpha + 1), 1].
double cbc_bound(const CriterionParams& params, const WeightSequence& gamma, std::size_t d, double lambda);

/// s^(1/l) (b^m - 1)^(-1/l) prod_{j<=s} (1 + gamma_j^l C)^(1/l). Throws
/// std::domain_error for lambda outside (1/(2 alpha), 1]; that interval is
/// empty for alpha <= 1/2.
double korobov_bound(const CriterionParams& params, const WeightSequence& gamma, std::size_t s, double lambda);

/// `count` points spread over (lo, 1], excluding lo itself and including 1.
std::vector<double> lambda_grid(double lo, std::size_t count);

/// B(alpha)^((1 + 2a') / (1 + 2a)) >= B(alpha', gamma^((1 + 2a') / (1 + 2a)))
/// for alpha <= alpha', up to a relative rounding slack of 1e-12.
bool jensen_transform_check(const PointSet& points, double alpha, double alpha_prime, const WeightSequence& gamma);

}  // namespace plr
