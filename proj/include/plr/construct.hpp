#pragma once

// Constructions of good generating vectors: naive component-by-component
// search, Korobov search, and the fast CBC variant that evaluates all
// candidates of one dimension with a single circulant matrix-vector product.

#include <cstdint>
#include <optional>
#include <vector>

#include "plr/circfft.hpp"
#include "plr/ff_poly.hpp"
#include "plr/pointset.hpp"
#include "plr/weights.hpp"

namespace plr {

struct CbcResult {
    GeneratingVector gv;
    /// Criterion of (q_1, ..., q_d) for d = 1..s.
    std::vector<double> per_dim_B;
    /// Selected candidate index per dimension: the discrete-log exponent when
    /// candidates are ordered by powers of g, the polynomial encoding otherwise.
    std::vector<std::uint64_t> trace;
};

/// Relative tolerance under which two candidate criteria count as tied; the
/// first candidate in canonical order wins.
inline constexpr double kTieTolerance = 1e-13;

/// Full criterion evaluation for every candidate of every dimension;
/// O(s^2 b^2m). q_1 = 1. With `order` set, candidates are scanned as g^0,
/// g^1, ... (matching cbc_fast), otherwise by increasing encoding.
CbcResult cbc_naive(const Modulus& p, std::size_t s, double alpha, const WeightSequence& gamma,
                    const DiscreteLogTable* order = nullptr);

struct KorobovResult {
    Poly q;
    GeneratingVector gv;
    double B;
};

/// Exhaustive search over q in R_{b,m} for psi(q) = (1, q, ..., q^{s-1}).
KorobovResult korobov_search(const Modulus& p, std::size_t s, double alpha, const WeightSequence& gamma);

/// a[k] = b^(2 alpha t_k).
CirculantKernel build_a3_kernel(const DiscreteLogTable& table, double alpha);

struct CbcFastOptions {
    std::size_t fft_threshold = ConvolutionPlan::kDefaultThreshold;
    /// Re-evaluate every prefix with criterion_B and throw std::logic_error
    /// if it disagrees with the state-derived value beyond 1e-10 relative.
    bool verify = false;
};

/// Algorithm with O(s b^m m) time and O(b^m) memory. Candidates are q = g^w;
/// q_1 = g^0 = 1. Throws std::invalid_argument if g is not primitive mod p.
CbcResult cbc_fast(const DiscreteLogTable& table, std::size_t s, double alpha, const WeightSequence& gamma,
                   const CbcFastOptions& options = {});

/// Convenience overload building the table for g (default x).
CbcResult cbc_fast(const Modulus& p, std::size_t s, double alpha, const WeightSequence& gamma,
                   std::optional<Poly> g = std::nullopt, const CbcFastOptions& options = {});

}  // namespace plr
