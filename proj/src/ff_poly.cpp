#include "plr/ff_poly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace plr {

namespace {

std::uint32_t mul_mod_b(std::uint32_t a, std::uint32_t c, std::uint32_t b) {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * c) % b);
}

std::uint32_t inverse_mod_b(std::uint32_t a, std::uint32_t b) {
    if (a % b == 0) throw std::domain_error("zero has no inverse in Z_b");
    // Fermat: a^(b-2)
    std::uint64_t result = 1, base = a % b;
    std::uint32_t e = b - 2;
    while (e != 0) {
        if (e & 1U) result = result * base % b;
        base = base * base % b;
        e >>= 1U;
    }
    return static_cast<std::uint32_t>(result);
}

void require_same_base(const Poly& a, const Poly& c) {
    if (a.base() != c.base()) {
        throw std::invalid_argument("polynomials over different bases: " + std::to_string(a.base()) +
                                    " vs " + std::to_string(c.base()));
    }
}

void validate_base(std::uint32_t b) {
    if (b < 2 || b > kMaxBase || !is_prime(b)) {
        throw std::invalid_argument("base must be a prime <= " + std::to_string(kMaxBase) +
                                    ", got " + std::to_string(b));
    }
}

// a * c mod p for arbitrary (not necessarily irreducible) p.
Poly raw_mul_mod(const Poly& a, const Poly& c, const Poly& p) { return poly_mod(a * c, p); }

Poly raw_pow_mod(Poly a, std::uint64_t e, const Poly& p) {
    Poly result = poly_mod(Poly::constant(p.base(), 1), p);
    a = poly_mod(a, p);
    while (e != 0) {
        if (e & 1U) result = raw_mul_mod(result, a, p);
        a = raw_mul_mod(a, a, p);
        e >>= 1U;
    }
    return result;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (b != 0 && r > std::numeric_limits<std::uint64_t>::max() / b)
            throw std::overflow_error("integer power overflows 64 bits");
        r *= b;
    }
    return r;
}

void check_point_budget(std::uint32_t b, int m, double max_log2_points) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    const double log2_points = m * std::log2(static_cast<double>(b));
    if (log2_points > max_log2_points + 1e-9) {
        std::ostringstream msg;
        msg << "b^m = " << b << "^" << m << " exceeds the configured limit of 2^" << max_log2_points
            << " points";
        throw std::length_error(msg.str());
    }
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(std::uint32_t value, std::uint32_t base) : value_(value), base_(base) {
    validate_base(base);
    if (value >= base) throw std::invalid_argument("field element out of range");
}

FieldElement FieldElement::operator+(FieldElement o) const {
    if (o.base_ != base_) throw std::invalid_argument("field elements over different bases");
    return {(value_ + o.value_) % base_, base_};
}

FieldElement FieldElement::operator-(FieldElement o) const {
    if (o.base_ != base_) throw std::invalid_argument("field elements over different bases");
    return {(value_ + base_ - o.value_) % base_, base_};
}

FieldElement FieldElement::operator*(FieldElement o) const {
    if (o.base_ != base_) throw std::invalid_argument("field elements over different bases");
    return {mul_mod_b(value_, o.value_, base_), base_};
}

FieldElement FieldElement::inverse() const { return {inverse_mod_b(value_, base_), base_}; }

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(std::uint32_t base) : base_(base) { validate_base(base); }

Poly::Poly(std::uint32_t base, std::vector<std::uint32_t> coeffs) : base_(base), coeffs_(std::move(coeffs)) {
    validate_base(base);
    for (auto c : coeffs_)
        if (c >= base_) throw std::invalid_argument("coefficient out of range for base");
    normalize();
}

void Poly::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly Poly::from_encoding(std::uint32_t base, std::uint64_t code) {
    Poly out(base);
    while (code != 0) {
        out.coeffs_.push_back(static_cast<std::uint32_t>(code % base));
        code /= base;
    }
    out.normalize();
    return out;
}

Poly Poly::monomial(std::uint32_t base, int degree, std::uint32_t coeff) {
    if (degree < 0) throw std::invalid_argument("negative monomial degree");
    std::vector<std::uint32_t> c(static_cast<std::size_t>(degree) + 1, 0U);
    c.back() = coeff % base;
    return Poly(base, std::move(c));
}

Poly Poly::parse(std::uint32_t base, std::string_view text) {
    validate_base(base);
    if (text.starts_with("dec:")) {
        text.remove_prefix(4);
        std::uint64_t code = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), code);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
            throw std::invalid_argument("malformed decimal polynomial encoding '" + std::string(text) + "'");
        return from_encoding(base, code);
    }
    if (text.empty()) throw std::invalid_argument("empty polynomial string");
    if (base > 36) throw std::invalid_argument("digit strings need base <= 36; use dec:<encoding>");
    std::vector<std::uint32_t> c;
    c.reserve(text.size());
    for (auto it = text.rbegin(); it != text.rend(); ++it) {
        const char ch = *it;
        std::uint32_t d;
        if (ch >= '0' && ch <= '9')
            d = static_cast<std::uint32_t>(ch - '0');
        else if (ch >= 'a' && ch <= 'z')
            d = static_cast<std::uint32_t>(ch - 'a' + 10);
        else
            throw std::invalid_argument("bad digit '" + std::string(1, ch) + "' in polynomial string");
        if (d >= base)
            throw std::invalid_argument("digit '" + std::string(1, ch) + "' out of range for base " +
                                        std::to_string(base));
        c.push_back(d);
    }
    return Poly(base, std::move(c));
}

std::uint64_t Poly::encoding() const {
    std::uint64_t code = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        if (code > (std::numeric_limits<std::uint64_t>::max() - *it) / base_)
            throw std::overflow_error("polynomial encoding overflows 64 bits");
        code = code * base_ + *it;
    }
    return code;
}

std::string Poly::to_digit_string() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    s.reserve(coeffs_.size());
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        const auto d = *it;
        s.push_back(d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + d - 10));
    }
    return s;
}

std::string Poly::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const auto c = coeffs_[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        if (!first) out << " + ";
        first = false;
        if (c != 1 || i == 0) out << c;
        if (i >= 1) out << "x";
        if (i >= 2) out << "^" << i;
    }
    return out.str();
}

Poly operator+(const Poly& a, const Poly& c) {
    require_same_base(a, c);
    const auto b = a.base();
    std::vector<std::uint32_t> r(std::max(a.coeffs_.size(), c.coeffs_.size()), 0U);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (a.coeff(i) + c.coeff(i)) % b;
    return Poly(b, std::move(r));
}

Poly operator-(const Poly& a, const Poly& c) {
    require_same_base(a, c);
    const auto b = a.base();
    std::vector<std::uint32_t> r(std::max(a.coeffs_.size(), c.coeffs_.size()), 0U);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (a.coeff(i) + b - c.coeff(i)) % b;
    return Poly(b, std::move(r));
}

Poly operator*(const Poly& a, const Poly& c) {
    require_same_base(a, c);
    const auto b = a.base();
    if (a.is_zero() || c.is_zero()) return Poly(b);
    std::vector<std::uint64_t> acc(a.coeffs_.size() + c.coeffs_.size() - 1, 0U);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < c.coeffs_.size(); ++j)
            acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(a.coeffs_[i]) * c.coeffs_[j]) % b;
    }
    std::vector<std::uint32_t> r(acc.size());
    std::transform(acc.begin(), acc.end(), r.begin(), [](std::uint64_t v) { return static_cast<std::uint32_t>(v); });
    return Poly(b, std::move(r));
}

Poly Poly::scaled(std::uint32_t c) const {
    std::vector<std::uint32_t> r(coeffs_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = mul_mod_b(coeffs_[i], c % base_, base_);
    return Poly(base_, std::move(r));
}

PolyDivMod divmod(const Poly& a, const Poly& d) {
    require_same_base(a, d);
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    const auto b = a.base();
    if (a.degree() < d.degree()) return {Poly(b), a};

    std::vector<std::uint32_t> rem(a.coeffs().begin(), a.coeffs().end());
    const auto dd = static_cast<std::size_t>(d.degree());
    std::vector<std::uint32_t> quot(rem.size() - dd, 0U);
    const auto lead_inv = inverse_mod_b(d.leading(), b);
    for (std::size_t k = rem.size(); k-- > dd;) {
        const auto top = rem[k];
        if (top == 0) continue;
        const auto f = mul_mod_b(top, lead_inv, b);
        quot[k - dd] = f;
        for (std::size_t i = 0; i <= dd; ++i) {
            const auto sub = mul_mod_b(f, d.coeff(i), b);
            auto& r = rem[k - dd + i];
            r = (r + b - sub) % b;
        }
    }
    rem.resize(dd);
    return {Poly(b, std::move(quot)), Poly(b, std::move(rem))};
}

Poly poly_mod(const Poly& a, const Poly& d) { return divmod(a, d).remainder; }

Poly poly_gcd(Poly a, Poly c) {
    require_same_base(a, c);
    while (!c.is_zero()) {
        Poly r = poly_mod(a, c);
        a = std::move(c);
        c = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.scaled(inverse_mod_b(a.leading(), a.base()));
}

bool is_irreducible(const Poly& p) {
    const int m = p.degree();
    if (m < 1) return false;
    if (m == 1) return true;
    const auto b = p.base();
    const Poly x = Poly::monomial(b, 1);
    // Ben-Or: p is irreducible iff gcd(x^(b^i) - x, p) = 1 for i = 1..m/2.
    Poly r = poly_mod(x, p);
    for (int i = 1; i <= m / 2; ++i) {
        r = raw_pow_mod(r, b, p);
        const Poly g = poly_gcd(r - x, p);
        if (g.degree() > 0) return false;
    }
    return true;
}

bool is_primitive(const Poly& p, const Poly& g) {
    require_same_base(p, g);
    const int m = p.degree();
    if (m < 1) return false;
    const Poly gm = poly_mod(g, p);
    if (gm.is_zero()) return false;
    const std::uint64_t order = ipow(p.base(), static_cast<unsigned>(m)) - 1;
    const Poly one = Poly::constant(p.base(), 1);
    if (raw_pow_mod(gm, order, p) != one) return false;
    for (auto r : prime_factors(order))
        if (raw_pow_mod(gm, order / r, p) == one) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Modulus

Modulus::Modulus(Poly p) : p_(std::move(p)), x_primitive_(false), size_(0) {
    if (p_.degree() < 1) throw std::invalid_argument("modulus must have degree >= 1");
    if (!is_irreducible(p_)) throw std::invalid_argument("modulus " + p_.to_string() + " is not irreducible");
    size_ = ipow(p_.base(), static_cast<unsigned>(p_.degree()));
    x_primitive_ = is_primitive(p_, Poly::monomial(p_.base(), 1));
}

Poly poly_mul_mod(const Poly& a, const Poly& c, const Modulus& p) {
    require_same_base(a, p.poly());
    require_same_base(c, p.poly());
    return raw_mul_mod(a, c, p.poly());
}

Poly poly_pow_mod(const Poly& a, std::uint64_t e, const Modulus& p) {
    require_same_base(a, p.poly());
    return raw_pow_mod(a, e, p.poly());
}

Modulus find_modulus(std::uint32_t b, int m, bool require_primitive) {
    validate_base(b);
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    const std::uint64_t lo = ipow(b, static_cast<unsigned>(m));
    const Poly x = Poly::monomial(b, 1);
    // Monic polynomials have the smallest encodings among those of degree m.
    for (std::uint64_t code = lo; code < 2 * lo; ++code) {
        Poly p = Poly::from_encoding(b, code);
        if (!is_irreducible(p)) continue;
        if (require_primitive && !is_primitive(p, x)) continue;
        return Modulus(std::move(p));
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable for prime b
}

// ---------------------------------------------------------------------------
// Laurent expansion

std::vector<std::uint32_t> laurent_digits(const Poly& w, const Modulus& p, std::size_t L) {
    require_same_base(w, p.poly());
    const int m = p.degree();
    if (w.degree() >= m) throw std::invalid_argument("laurent_digits requires deg(w) < deg(p)");
    const auto b = p.base();
    const auto mm = static_cast<std::size_t>(m);
    const auto lead_inv = inverse_mod_b(p.poly().leading(), b);

    std::vector<std::uint32_t> r(mm + 1, 0U);
    for (std::size_t i = 0; i < mm; ++i) r[i] = w.coeff(i);
    std::vector<std::uint32_t> u(L, 0U);
    for (std::size_t l = 0; l < L; ++l) {
        // r <- x * r; the quotient digit is the coefficient that reaches degree m.
        for (std::size_t i = mm; i > 0; --i) r[i] = r[i - 1];
        r[0] = 0;
        const auto top = r[mm];
        if (top == 0) continue;
        const auto f = mul_mod_b(top, lead_inv, b);
        u[l] = f;
        for (std::size_t i = 0; i <= mm; ++i) r[i] = (r[i] + b - mul_mod_b(f, p.poly().coeff(i), b)) % b;
    }
    return u;
}

std::uint64_t v_m(const Poly& w, const Modulus& p) {
    const auto m = static_cast<std::size_t>(p.degree());
    const auto u = laurent_digits(w, p, m);
    std::uint64_t n = 0;
    for (auto d : u) n = n * p.base() + d;
    return n;
}

// ---------------------------------------------------------------------------
// DiscreteLogTable

std::uint32_t DiscreteLogTable::log(std::uint64_t encoding) const {
    if (encoding == 0 || encoding >= log_.size()) throw std::out_of_range("log of zero or out-of-range residue");
    return log_[encoding];
}

DiscreteLogTable build_log_table(const Modulus& p, const Poly& g) {
    require_same_base(g, p.poly());
    const auto b = p.base();
    const int m = p.degree();
    check_point_budget(b, m, 30.0);
    const auto size = static_cast<std::size_t>(p.size());
    const auto n = size - 1;

    DiscreteLogTable table(p, poly_mod(g, p.poly()));
    table.pow_.resize(n);
    table.t_.resize(n);
    constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
    table.log_.assign(size, kUnset);

    // Residues are kept as digit vectors; multiplication by g is a linear map,
    // applied through the precomputed images of the basis x^i * g mod p.
    const auto mm = static_cast<std::size_t>(m);
    std::vector<std::vector<std::uint32_t>> basis(mm, std::vector<std::uint32_t>(mm, 0U));
    for (std::size_t i = 0; i < mm; ++i) {
        const Poly img = poly_mul_mod(Poly::monomial(b, static_cast<int>(i)), table.g_, p);
        for (std::size_t k = 0; k < mm; ++k) basis[i][k] = img.coeff(k);
    }

    std::vector<std::uint32_t> cur(mm, 0U), next(mm, 0U);
    cur[0] = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::uint64_t code = 0;
        int deg = -1;
        for (std::size_t i = mm; i-- > 0;) {
            code = code * b + cur[i];
            if (deg < 0 && cur[i] != 0) deg = static_cast<int>(i);
        }
        if (code == 0 || table.log_[code] != kUnset)
            throw std::invalid_argument("generator " + g.to_string() + " is not primitive modulo " +
                                        p.poly().to_string());
        table.pow_[k] = static_cast<std::uint32_t>(code);
        table.log_[code] = static_cast<std::uint32_t>(k);
        table.t_[k] = static_cast<std::uint8_t>(deg);

        std::fill(next.begin(), next.end(), 0U);
        for (std::size_t i = 0; i < mm; ++i) {
            if (cur[i] == 0) continue;
            for (std::size_t r = 0; r < mm; ++r)
                next[r] = static_cast<std::uint32_t>((next[r] + static_cast<std::uint64_t>(cur[i]) * basis[i][r]) % b);
        }
        cur.swap(next);
    }
    // After b^m - 1 steps we must be back at 1.
    if (cur[0] != 1 || std::any_of(cur.begin() + 1, cur.end(), [](auto v) { return v != 0; }))
        throw std::invalid_argument("generator is not primitive");
    return table;
}

}  // namespace plr
