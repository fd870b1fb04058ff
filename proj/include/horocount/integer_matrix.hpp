#pragma once

#include "horocount/partition.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace horocount {

/// Dense n×n integer matrix with overflow-checked arithmetic.
class IntegerMatrix {
public:
    IntegerMatrix() = default;
    explicit IntegerMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n * n), 0) {}

    static IntegerMatrix identity(int n);
    static IntegerMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);
    /// I + t·E_ij (0-based, i != j).
    static IntegerMatrix elementary(int n, int i, int j, std::int64_t t);

    int n() const { return n_; }
    std::int64_t operator()(int r, int c) const { return a_[idx(r, c)]; }
    std::int64_t& operator()(int r, int c) { return a_[idx(r, c)]; }

    std::vector<std::int64_t> column(int c) const;
    void set_column(int c, const std::vector<std::int64_t>& v);
    /// row dst += t · row src, i.e. left multiplication by I + t·E_{dst,src}.
    void add_row_multiple(int dst, int src, std::int64_t t);

    IntegerMatrix operator*(const IntegerMatrix& o) const;
    std::int64_t determinant() const;
    /// Exact inverse via the adjugate; requires det = ±1.
    IntegerMatrix inverse_unimodular() const;
    Eigen::MatrixXd to_real() const;
    std::string to_string() const;

    const std::vector<std::int64_t>& data() const { return a_; }

    friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

private:
    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r * n_ + c); }

    int n_ = 0;
    std::vector<std::int64_t> a_;
};

namespace lattice {

using Vec = std::vector<std::int64_t>;

std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);

/// Row-style Hermite normal form of the lattice spanned by the given vectors:
/// echelon rows with positive pivots, entries above each pivot in [0, pivot).
/// Zero rows are dropped, so the result is a basis.
std::vector<Vec> hermite_normal_form(std::vector<Vec> generators);

/// Canonical representative of v modulo the lattice with HNF basis `hnf`.
Vec reduce_modulo(Vec v, const std::vector<Vec>& hnf);

/// Sign-normalised class of ±v modulo the lattice: the lexicographically
/// smaller of reduce(v) and reduce(-v).
Vec reduce_up_to_sign(const Vec& v, const std::vector<Vec>& hnf);

/// gcd of all m×m minors of the m given vectors (m ≤ dimension).
std::int64_t minor_gcd(const std::vector<Vec>& vectors);

/// det(CᵀC) for C with the given columns, exact.
__int128 gram_determinant(const std::vector<Vec>& vectors);

/// Extended Euclid over a vector: returns x with Σ a_i x_i = gcd(a).
Vec bezout(const Vec& a, std::int64_t& gcd_out);

} // namespace lattice

} // namespace horocount
