#pragma once

// Owen's nested scrambling, the equal-weight estimator, and replicated
// variance estimation.
//
// Randomness comes from a keyed hash: the permutation at a tree node is a
// pure function of (seed, replicate, coordinate, digit path), so nothing is
// stored and any evaluation order gives the same bits.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plr/pointset.hpp"

namespace plr {

struct ScrambleSpec {
    /// Digits scrambled explicitly; 0 selects m. Must be >= m otherwise.
    int depth = 0;
    std::uint64_t seed = 0;
};

/// Real-valued coordinates in [0, 1), row-major like PointSet.
class ScrambledPointSet {
public:
    ScrambledPointSet(std::uint32_t b, std::size_t n_points, std::size_t s);

    std::uint32_t base() const { return b_; }
    std::size_t size() const { return n_; }
    std::size_t dimension() const { return s_; }
    double at(std::size_t h, std::size_t j) const { return values_[h * s_ + j]; }
    double& at(std::size_t h, std::size_t j) { return values_[h * s_ + j]; }
    std::span<const double> row(std::size_t h) const { return {values_.data() + h * s_, s_}; }
    std::span<const double> data() const { return values_; }

    bool operator==(const ScrambledPointSet&) const = default;

private:
    std::uint32_t b_;
    std::size_t n_;
    std::size_t s_;
    std::vector<double> values_;
};

/// 64-bit mixing function (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

/// Uniform random permutation of {0, ..., b-1} determined by `key`.
std::vector<std::uint32_t> node_permutation(std::uint64_t key, std::uint32_t b);

/// Scrambles `depth` digits of every coordinate; the digits below are one
/// uniform tail per distinct scrambled prefix. Parallel over coordinates.
ScrambledPointSet owen_scramble(const PointSet& points, const ScrambleSpec& spec, std::uint64_t replicate = 0);

/// Real coordinates n / b^m without scrambling.
ScrambledPointSet to_real(const PointSet& points);

/// i.i.d. uniform points (std::mt19937_64 keyed by seed and replicate), the
/// plain Monte Carlo baseline.
ScrambledPointSet monte_carlo_points(std::size_t n_points, std::size_t s, std::uint64_t seed, std::uint64_t replicate);

struct Integrand {
    std::string id;
    std::size_t dimension;
    std::function<double(std::span<const double>)> f;
    double exact;

    double operator()(std::span<const double> x) const { return f(x); }
};

/// Built-ins, all with exact integral 1 and theta_j = 1/j:
///   prodlin   prod (1 + theta_j (x_j - 1/2))
///   prodquad  prod (1 + theta_j ((x_j - 1/2)^2 - 1/12))
///   holder    prod (1 + theta_j (|x_j - c|^a - E|x - c|^a)), defaults a = 0.5, c = 0.3
/// plus const:v (f = v). Accepted names: "prodlin", "prodquad", "holder",
/// "holder:a,c", "const:v". Throws std::invalid_argument.
Integrand make_integrand(std::string_view name, std::size_t s);

/// The built-in names exercised by the statistics suite.
std::vector<std::string> builtin_integrands();

/// Equal-weight average over all points, accumulated in double-double.
double estimate(const Integrand& f, const ScrambledPointSet& pts);

struct VarianceEstimate {
    double mean;
    double variance;  // unbiased sample variance of the R estimates
    double standard_error;  // sqrt(variance / R)
    std::vector<double> estimates;
};

/// R independent scrambles with replicate indices 0..R-1 under spec.seed.
/// Throws std::invalid_argument for R < 2.
VarianceEstimate replicate_variance(const Integrand& f, const PointSet& points, std::size_t R, const ScrambleSpec& spec);
VarianceEstimate replicate_variance(const Integrand& f, const GeneratingVector& gv, std::size_t R, const ScrambleSpec& spec);

/// Same statistics for plain Monte Carlo with n_points samples per replicate.
VarianceEstimate monte_carlo_variance(const Integrand& f, std::size_t n_points, std::size_t R, std::uint64_t seed);

}  // namespace plr
