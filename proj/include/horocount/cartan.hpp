#pragma once

#include "horocount/partition.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace horocount {

/// Traceless diagonal vector in logarithmic coordinates (an element of the
/// Cartan subalgebra of sl_N). Norms and inner products are the trace form,
/// which on diagonals is the Euclidean one.
class CartanVector {
public:
    CartanVector() = default;
    explicit CartanVector(int n) : entries_(static_cast<std::size_t>(n), 0.0) {}

    /// Accepts entries whose sum vanishes to 1e-9 relative; the residual mean
    /// is removed. Throws ValidationError otherwise.
    static CartanVector from_entries(std::vector<double> entries);
    /// Orthogonal projection of an arbitrary vector onto the traceless space.
    static CartanVector project(std::vector<double> entries);

    int n() const { return static_cast<int>(entries_.size()); }
    double operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
    std::span<const double> entries() const { return entries_; }

    double dot(const CartanVector& other) const;
    double norm() const;
    double sum() const;

    CartanVector operator+(const CartanVector& o) const;
    CartanVector operator-(const CartanVector& o) const;
    CartanVector operator*(double s) const;

private:
    std::vector<double> entries_;
};

/// λ_I of a positive diagonal: the product of the entries indexed by I.
double lambda(std::span<const double> positive_diagonal, std::span<const int> indices);
/// λ_I of exp(y): exp of the partial sum over I.
double lambda(const CartanVector& y, std::span<const int> indices);

/// Decomposition y = aM + aZ with aM in a_M (zero block sums) and aZ in
/// a_{I0} (constant on blocks). The two parts are trace-form orthogonal.
struct BlockDiagonalSplit {
    CartanVector aM;
    CartanVector aZ;
};

BlockDiagonalSplit split(const Partition& p, const CartanVector& y);

bool has_zero_block_sums(const Partition& p, const CartanVector& y, double tol = 1e-9);
bool is_block_constant(const Partition& p, const CartanVector& y, double tol = 1e-9);
/// Closed chamber of a_M: weakly decreasing inside every block.
bool in_chamber(const Partition& p, const CartanVector& aM, double tol = 1e-12);

/// Haar density factor ρ(a,b) = α_{I0}(b) · Π_{i<j, i~j} sinh(a_i - a_j).
/// Returns 0 on chamber walls. Throws ValidationError when aM lies outside the
/// closed chamber or the components are not in their subspaces.
double rho_density(const Partition& p, const CartanVector& aM, const CartanVector& b);

/// v0 = diag(N-1, N-3, ..., 1-N), the sum of positive roots under the trace form.
CartanVector v0(int n);
/// P_N = ||v0||.
double p_norm(int n);
/// Σ_i (N-2i+1)^2 by direct summation.
std::int64_t p_norm_squared_sum(int n);
/// N(N-1)(N+1)/3.
std::int64_t p_norm_squared_closed(int n);

/// The cone C_C: intra-block differences a_i - a_j >= max(0,C) for i<j and
/// prefix sums over I_1 ∪ ... ∪ I_k >= C for k < k0. offset = 0 is the positive
/// cone a_M^+ ⊕ a_{I0}^+.
struct Cone {
    Partition partition;
    double offset = 0.0;

    bool contains(const CartanVector& y, double tol = 1e-12) const;
};

} // namespace horocount
