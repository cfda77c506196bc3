#pragma once

// Polynomials over the prime field Z_b.
//
// Encoding convention used throughout the library: the coefficient digits of a
// polynomial read as a base-b integer, constant term least significant. So for
// b = 2 the polynomial x^4 + x + 1 has encoding 19 and digit string "10011".

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plr {

/// Largest admissible base; keeps coefficient products inside 64 bits.
inline constexpr std::uint32_t kMaxBase = 65521;

/// Default cap on log2(b^m) for anything that allocates per point or residue.
inline constexpr double kDefaultMaxLog2Points = 26.0;

bool is_prime(std::uint64_t n);

/// b^e with overflow detection (throws std::overflow_error).
std::uint64_t ipow(std::uint64_t b, unsigned e);

/// Throws std::length_error when b^m exceeds 2^max_log2_points.
void check_point_budget(std::uint32_t b, int m, double max_log2_points = kDefaultMaxLog2Points);

/// An element of Z_b; the base is validated to be prime.
class FieldElement {
public:
    FieldElement(std::uint32_t value, std::uint32_t base);

    std::uint32_t value() const { return value_; }
    std::uint32_t base() const { return base_; }

    FieldElement operator+(FieldElement o) const;
    FieldElement operator-(FieldElement o) const;
    FieldElement operator*(FieldElement o) const;
    FieldElement inverse() const;
    bool operator==(const FieldElement&) const = default;

private:
    std::uint32_t value_;
    std::uint32_t base_;
};

class Poly {
public:
    explicit Poly(std::uint32_t base);
    /// Coefficients lowest degree first; trailing zeros are stripped.
    Poly(std::uint32_t base, std::vector<std::uint32_t> coeffs);

    static Poly from_encoding(std::uint32_t base, std::uint64_t code);
    static Poly monomial(std::uint32_t base, int degree, std::uint32_t coeff = 1);
    static Poly constant(std::uint32_t base, std::uint32_t c) { return monomial(base, 0, c); }

    /// Accepts a base-b digit string, most significant first ("10011"), or a
    /// decimal integer encoding written as "dec:19". Throws std::invalid_argument.
    static Poly parse(std::uint32_t base, std::string_view text);

    std::uint32_t base() const { return base_; }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    std::span<const std::uint32_t> coeffs() const { return coeffs_; }
    std::uint32_t coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0U; }
    std::uint32_t leading() const { return coeffs_.empty() ? 0U : coeffs_.back(); }

    std::uint64_t encoding() const;
    /// Most significant digit first; "0" for the zero polynomial.
    std::string to_digit_string() const;
    /// Human readable, e.g. "x^4 + x + 1".
    std::string to_string() const;

    friend Poly operator+(const Poly& a, const Poly& c);
    friend Poly operator-(const Poly& a, const Poly& c);
    friend Poly operator*(const Poly& a, const Poly& c);
    Poly scaled(std::uint32_t c) const;
    bool operator==(const Poly&) const = default;

private:
    void normalize();

    std::uint32_t base_;
    std::vector<std::uint32_t> coeffs_;
};

struct PolyDivMod {
    Poly quotient;
    Poly remainder;
};

/// Long division; throws std::domain_error on division by zero.
PolyDivMod divmod(const Poly& a, const Poly& d);
Poly poly_mod(const Poly& a, const Poly& d);
/// Monic gcd.
Poly poly_gcd(Poly a, Poly c);

bool is_irreducible(const Poly& p);

/// True iff the multiplicative order of g modulo p is b^m - 1. This already
/// implies that p is irreducible, so reducible p simply yields false.
bool is_primitive(const Poly& p, const Poly& g);

/// Irreducible modulus of degree m >= 1, optionally primitive with respect to
/// the element x.
class Modulus {
public:
    /// Throws std::invalid_argument if p is not irreducible of degree >= 1.
    explicit Modulus(Poly p);

    const Poly& poly() const { return p_; }
    std::uint32_t base() const { return p_.base(); }
    int degree() const { return p_.degree(); }
    /// Whether x generates the multiplicative group of Z_b[x]/p.
    bool x_is_primitive() const { return x_primitive_; }
    /// b^m
    std::uint64_t size() const { return size_; }

private:
    Poly p_;
    bool x_primitive_;
    std::uint64_t size_;
};

/// a * c mod p. Throws std::invalid_argument on base mismatch.
Poly poly_mul_mod(const Poly& a, const Poly& c, const Modulus& p);
Poly poly_pow_mod(const Poly& a, std::uint64_t e, const Modulus& p);

/// Deterministic: the irreducible (and optionally primitive-with-g=x)
/// polynomial of degree m with the smallest integer encoding.
Modulus find_modulus(std::uint32_t b, int m, bool require_primitive);

/// First L coefficients u_1..u_L of w(x)/p(x) = u_1 x^-1 + u_2 x^-2 + ...
/// Requires deg(w) < m.
std::vector<std::uint32_t> laurent_digits(const Poly& w, const Modulus& p, std::size_t L);

/// Numerator n in [0, b^m) with v_m(w/p) = n / b^m (digits u_1..u_m packed
/// most significant first).
std::uint64_t v_m(const Poly& w, const Modulus& p);

/// Powers of a primitive element g modulo p, indexed by exponent, together
/// with the inverse map and the degree sequence t_k = deg(g^k mod p).
class DiscreteLogTable {
public:
    const Modulus& modulus() const { return modulus_; }
    const Poly& generator() const { return g_; }
    /// b^m - 1
    std::size_t order() const { return pow_.size(); }
    /// Encoding of g^k mod p, k in [0, b^m - 2].
    std::uint32_t pow(std::size_t k) const { return pow_[k]; }
    /// Exponent k with g^k = residue (encoding must be nonzero).
    std::uint32_t log(std::uint64_t encoding) const;
    std::uint8_t degree(std::size_t k) const { return t_[k]; }

    std::span<const std::uint32_t> powers() const { return pow_; }
    std::span<const std::uint8_t> degrees() const { return t_; }

private:
    friend DiscreteLogTable build_log_table(const Modulus& p, const Poly& g);
    DiscreteLogTable(Modulus modulus, Poly g) : modulus_(std::move(modulus)), g_(std::move(g)) {}

    Modulus modulus_;
    Poly g_;
    std::vector<std::uint32_t> pow_;
    std::vector<std::uint32_t> log_;
    std::vector<std::uint8_t> t_;
};

/// O(b^m * m) construction by repeated multiplication. Throws
/// std::invalid_argument if g is not primitive (a power repeats early).
DiscreteLogTable build_log_table(const Modulus& p, const Poly& g);

}  // namespace plr
