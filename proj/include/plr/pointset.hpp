#pragma once

// Polynomial lattice point sets and general digital nets over Z_b.
//
// Coordinates are stored as integer numerators n in [0, b^m); the real
// coordinate is n / b^m. Nothing here touches floating point.

#include <cstdint>
#include <span>
#include <vector>

#include "plr/ff_poly.hpp"

namespace plr {

/// Generating vector q = (q_1, ..., q_s) of a polynomial lattice rule. Every
/// component is a nonzero polynomial of degree < m.
class GeneratingVector {
public:
    GeneratingVector(Modulus modulus, std::vector<Poly> q);

    const Modulus& modulus() const { return modulus_; }
    std::span<const Poly> q() const { return q_; }
    const Poly& operator[](std::size_t j) const { return q_[j]; }
    std::size_t dimension() const { return q_.size(); }
    std::uint32_t base() const { return modulus_.base(); }
    int m() const { return modulus_.degree(); }

private:
    Modulus modulus_;
    std::vector<Poly> q_;
};

class PointSet {
public:
    PointSet(std::uint32_t b, int m, std::size_t s);
    PointSet(std::uint32_t b, int m, std::size_t s, std::vector<std::uint32_t> coords);

    std::uint32_t base() const { return b_; }
    int m() const { return m_; }
    std::size_t dimension() const { return s_; }
    std::size_t size() const { return n_points_; }
    /// b^m
    std::uint64_t denominator() const { return n_points_; }

    std::uint32_t at(std::size_t h, std::size_t j) const { return coords_[h * s_ + j]; }
    std::uint32_t& at(std::size_t h, std::size_t j) { return coords_[h * s_ + j]; }
    std::span<const std::uint32_t> row(std::size_t h) const { return {coords_.data() + h * s_, s_}; }
    std::span<const std::uint32_t> data() const { return coords_; }

    bool operator==(const PointSet&) const = default;

private:
    std::uint32_t b_;
    int m_;
    std::size_t s_;
    std::size_t n_points_;
    std::vector<std::uint32_t> coords_;  // row-major, n_points_ x s_
};

/// s square m x m matrices over Z_b, stored row-major.
class GeneratingMatrixSet {
public:
    GeneratingMatrixSet(std::uint32_t b, int m, std::size_t s);

    std::uint32_t base() const { return b_; }
    int m() const { return m_; }
    std::size_t dimension() const { return s_; }

    std::uint32_t at(std::size_t j, std::size_t row, std::size_t col) const {
        return entries_[(j * mm() + row) * mm() + col];
    }
    void set(std::size_t j, std::size_t row, std::size_t col, std::uint32_t v);

    bool operator==(const GeneratingMatrixSet&) const = default;

private:
    std::size_t mm() const { return static_cast<std::size_t>(m_); }

    std::uint32_t b_;
    int m_;
    std::size_t s_;
    std::vector<std::uint32_t> entries_;
};

/// Table of v_m(w / p) for every residue w (indexed by its encoding).
std::vector<std::uint32_t> vm_table(const Modulus& p);

/// Row h, column j is v_m(h(x) q_j(x) mod p). Parallel over coordinates.
PointSet generate_points(const GeneratingVector& gv);

/// (C_j)_{i,r} = u_{i+r} of q_j / p for i = 1..m, r = 0..m-1 (Hankel matrix of
/// Laurent digits); the 0-based row index is i - 1.
GeneratingMatrixSet generating_matrices(const GeneratingVector& gv);

/// Digits of coordinate j of point h are C_j * (h_0, ..., h_{m-1})^T over Z_b,
/// packed most significant first.
PointSet points_from_matrices(const GeneratingMatrixSet& M);

/// Whether tr_m(k_1) q_1 + ... + tr_m(k_s) q_s == 0 (mod p).
bool dual_membership(std::span<const std::uint64_t> k, const GeneratingVector& gv);

/// Korobov vector psi(q) = (1, q, q^2, ..., q^{s-1}) mod p.
GeneratingVector korobov_vector(const Modulus& p, const Poly& q, std::size_t s);

}  // namespace plr
