#include "plr/pointset.hpp"

#include <stdexcept>
#include <string>

namespace plr {

GeneratingVector::GeneratingVector(Modulus modulus, std::vector<Poly> q)
    : modulus_(std::move(modulus)), q_(std::move(q)) {
    if (q_.empty()) throw std::invalid_argument("generating vector must have dimension >= 1");
    for (std::size_t j = 0; j < q_.size(); ++j) {
        const Poly& qj = q_[j];
        if (qj.base() != modulus_.base())
            throw std::invalid_argument("q_" + std::to_string(j + 1) + " has a different base than the modulus");
        if (qj.is_zero() || qj.degree() >= modulus_.degree())
            throw std::invalid_argument("q_" + std::to_string(j + 1) + " = " + qj.to_string() +
                                        " is not a nonzero polynomial of degree < m");
    }
}

PointSet::PointSet(std::uint32_t b, int m, std::size_t s) : PointSet(b, m, s, {}) {}

PointSet::PointSet(std::uint32_t b, int m, std::size_t s, std::vector<std::uint32_t> coords)
    : b_(b), m_(m), s_(s), n_points_(0), coords_(std::move(coords)) {
    check_point_budget(b, m, 30.0);
    if (s == 0) throw std::invalid_argument("point set dimension must be >= 1");
    n_points_ = static_cast<std::size_t>(ipow(b, static_cast<unsigned>(m)));
    if (coords_.empty()) coords_.assign(n_points_ * s_, 0U);
    if (coords_.size() != n_points_ * s_) throw std::invalid_argument("point set data has the wrong size");
    for (auto c : coords_)
        if (c >= n_points_) throw std::invalid_argument("point numerator out of range [0, b^m)");
}

GeneratingMatrixSet::GeneratingMatrixSet(std::uint32_t b, int m, std::size_t s) : b_(b), m_(m), s_(s) {
    if (b < 2 || !is_prime(b)) throw std::invalid_argument("matrix base must be prime");
    if (m < 1) throw std::invalid_argument("matrix size m must be >= 1");
    if (s == 0) throw std::invalid_argument("matrix set dimension must be >= 1");
    entries_.assign(s * mm() * mm(), 0U);
}

void GeneratingMatrixSet::set(std::size_t j, std::size_t row, std::size_t col, std::uint32_t v) {
    if (v >= b_) throw std::invalid_argument("matrix entry out of range [0, b)");
    entries_.at((j * mm() + row) * mm() + col) = v;
}

namespace {

// Walks h = 0, 1, ..., b^m - 1 while maintaining a linear image
// sum_r h_r * col_r over Z_b. Incrementing h changes digits 0..c (the carry
// chain) and every changed digit moves by +1 mod b, so the image changes by
// col_0 + ... + col_c. `emit(h, digits)` receives the current image.
template <class Emit>
void linear_walk(std::uint32_t b, std::size_t m, std::size_t n_points,
                 const std::vector<std::vector<std::uint32_t>>& cols, Emit&& emit) {
    std::vector<std::uint32_t> hdig(m, 0U);
    std::vector<std::uint32_t> img(m, 0U);
    emit(std::size_t{0}, img);
    for (std::size_t h = 1; h < n_points; ++h) {
        for (std::size_t r = 0; r < m; ++r) {
            const auto& col = cols[r];
            for (std::size_t i = 0; i < m; ++i) {
                auto v = img[i] + col[i];
                img[i] = v >= b ? v - b : v;
            }
            if (++hdig[r] < b) break;
            hdig[r] = 0;
        }
        emit(h, img);
    }
}

// Binary specialization: images packed into integers, addition is XOR.
template <class Emit>
void linear_walk_b2(std::size_t m, std::size_t n_points, const std::vector<std::uint32_t>& cols, Emit&& emit) {
    std::uint32_t img = 0;
    emit(std::size_t{0}, img);
    for (std::size_t h = 1; h < n_points; ++h) {
        // Carry chain of h-1 -> h: bits 0..ctz(h) flip.
        const auto c = static_cast<std::size_t>(__builtin_ctzll(h));
        for (std::size_t r = 0; r <= c && r < m; ++r) img ^= cols[r];
        emit(h, img);
    }
}

}  // namespace

std::vector<std::uint32_t> vm_table(const Modulus& p) {
    const auto b = p.base();
    const auto m = static_cast<std::size_t>(p.degree());
    const auto size = static_cast<std::size_t>(p.size());
    std::vector<std::uint32_t> table(size, 0U);
    // v_m is Z_b-linear in w, so each residue is a combination of the images of
    // the monomials x^r; the table is filled with the same carry walk over w.
    std::vector<std::vector<std::uint32_t>> cols(m);
    for (std::size_t r = 0; r < m; ++r) cols[r] = laurent_digits(Poly::monomial(b, static_cast<int>(r)), p, m);
    linear_walk(b, m, size, cols, [&](std::size_t w, const std::vector<std::uint32_t>& u) {
        std::uint32_t n = 0;
        for (auto d : u) n = n * b + d;
        table[w] = n;
    });
    return table;
}

PointSet generate_points(const GeneratingVector& gv) {
    const auto& p = gv.modulus();
    const auto b = p.base();
    const auto m = static_cast<std::size_t>(p.degree());
    const auto s = gv.dimension();
    PointSet out(b, p.degree(), s);
    const auto n_points = out.size();
    const auto vmt = vm_table(p);

    // Residue of h(x) q_j(x) mod p: linear in the digits of h with columns
    // x^r q_j mod p.
    const auto n_coords = static_cast<long>(s);
#pragma omp parallel for schedule(dynamic, 1)
    for (long jj = 0; jj < n_coords; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        std::vector<std::vector<std::uint32_t>> cols(m, std::vector<std::uint32_t>(m, 0U));
        for (std::size_t r = 0; r < m; ++r) {
            const Poly e = poly_mul_mod(Poly::monomial(b, static_cast<int>(r)), gv[j], p);
            for (std::size_t i = 0; i < m; ++i) cols[r][i] = e.coeff(i);
        }
        if (b == 2) {
            std::vector<std::uint32_t> packed(m, 0U);
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t i = 0; i < m; ++i) packed[r] |= cols[r][i] << i;
            linear_walk_b2(m, n_points, packed, [&](std::size_t h, std::uint32_t w) { out.at(h, j) = vmt[w]; });
        } else {
            linear_walk(b, m, n_points, cols, [&](std::size_t h, const std::vector<std::uint32_t>& w) {
                std::uint32_t code = 0;
                for (std::size_t i = m; i-- > 0;) code = code * b + w[i];
                out.at(h, j) = vmt[code];
            });
        }
    }
    return out;
}

GeneratingMatrixSet generating_matrices(const GeneratingVector& gv) {
    const auto& p = gv.modulus();
    const auto m = static_cast<std::size_t>(p.degree());
    GeneratingMatrixSet M(p.base(), p.degree(), gv.dimension());
    for (std::size_t j = 0; j < gv.dimension(); ++j) {
        const auto u = laurent_digits(gv[j], p, 2 * m - 1);  // u_1 .. u_{2m-1}
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t r = 0; r < m; ++r) M.set(j, i, r, u[i + r]);
    }
    return M;
}

PointSet points_from_matrices(const GeneratingMatrixSet& M) {
    const auto b = M.base();
    const auto m = static_cast<std::size_t>(M.m());
    const auto s = M.dimension();
    PointSet out(b, M.m(), s);
    const auto n_points = out.size();

    const auto n_coords = static_cast<long>(s);
#pragma omp parallel for schedule(dynamic, 1)
    for (long jj = 0; jj < n_coords; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        std::vector<std::vector<std::uint32_t>> cols(m, std::vector<std::uint32_t>(m, 0U));
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t i = 0; i < m; ++i) cols[r][i] = M.at(j, i, r);
        if (b == 2) {
            // Row i of C_j is digit i+1, i.e. bit m-1-i of the numerator.
            std::vector<std::uint32_t> packed(m, 0U);
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t i = 0; i < m; ++i) packed[r] |= cols[r][i] << (m - 1 - i);
            linear_walk_b2(m, n_points, packed, [&](std::size_t h, std::uint32_t y) { out.at(h, j) = y; });
        } else {
            linear_walk(b, m, n_points, cols, [&](std::size_t h, const std::vector<std::uint32_t>& y) {
                std::uint32_t n = 0;
                for (auto d : y) n = n * b + d;
                out.at(h, j) = n;
            });
        }
    }
    return out;
}

bool dual_membership(std::span<const std::uint64_t> k, const GeneratingVector& gv) {
    if (k.size() != gv.dimension())
        throw std::invalid_argument("dual vector length does not match the generating vector dimension");
    const auto& p = gv.modulus();
    const auto b = p.base();
    const auto size = p.size();
    Poly acc(b);
    for (std::size_t j = 0; j < k.size(); ++j) {
        const Poly tr = Poly::from_encoding(b, k[j] % size);
        if (tr.is_zero()) continue;
        acc = acc + tr * gv[j];
    }
    return poly_mod(acc, p.poly()).is_zero();
}

GeneratingVector korobov_vector(const Modulus& p, const Poly& q, std::size_t s) {
    std::vector<Poly> comps;
    comps.reserve(s);
    Poly cur = poly_mod(Poly::constant(p.base(), 1), p.poly());
    const Poly qm = poly_mod(q, p.poly());
    for (std::size_t j = 0; j < s; ++j) {
        comps.push_back(cur);
        cur = poly_mul_mod(cur, qm, p);
    }
    return GeneratingVector(p, std::move(comps));
}

}  // namespace plr
