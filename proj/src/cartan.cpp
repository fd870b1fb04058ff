#include "horocount/cartan.hpp"

#include "horocount/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace horocount {

namespace {

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void check_dims(const Partition& p, const CartanVector& y) {
    if (y.n() != p.n()) throw ValidationError("dimension mismatch between vector and partition");
}

} // namespace

CartanVector CartanVector::from_entries(std::vector<double> entries) {
    double scale = 1.0;
    for (double e : entries) scale = std::max(scale, std::abs(e));
    const double s = std::accumulate(entries.begin(), entries.end(), 0.0);
    if (std::abs(s) > 1e-9 * scale * static_cast<double>(std::max<std::size_t>(entries.size(), 1)))
        throw ValidationError("CartanVector entries must sum to zero");
    return project(std::move(entries));
}

CartanVector CartanVector::project(std::vector<double> entries) {
    const double m = mean(entries);
    for (double& e : entries) e -= m;
    CartanVector out;
    out.entries_ = std::move(entries);
    return out;
}

double CartanVector::dot(const CartanVector& other) const {
    if (other.n() != n()) throw ValidationError("CartanVector dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) s += entries_[i] * other.entries_[i];
    return s;
}

double CartanVector::norm() const { return std::sqrt(dot(*this)); }

double CartanVector::sum() const { return std::accumulate(entries_.begin(), entries_.end(), 0.0); }

CartanVector CartanVector::operator+(const CartanVector& o) const {
    if (o.n() != n()) throw ValidationError("CartanVector dimension mismatch");
    CartanVector r = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] += o.entries_[i];
    return r;
}

CartanVector CartanVector::operator-(const CartanVector& o) const { return *this + o * -1.0; }

CartanVector CartanVector::operator*(double s) const {
    CartanVector r = *this;
    for (double& e : r.entries_) e *= s;
    return r;
}

double lambda(std::span<const double> positive_diagonal, std::span<const int> indices) {
    double prod = 1.0;
    for (int i : indices) {
        if (i < 0 || static_cast<std::size_t>(i) >= positive_diagonal.size())
            throw ValidationError("lambda: index out of range");
        prod *= positive_diagonal[static_cast<std::size_t>(i)];
    }
    return prod;
}

double lambda(const CartanVector& y, std::span<const int> indices) {
    double s = 0.0;
    for (int i : indices) {
        if (i < 0 || i >= y.n()) throw ValidationError("lambda: index out of range");
        s += y[i];
    }
    return std::exp(s);
}

BlockDiagonalSplit split(const Partition& p, const CartanVector& y) {
    check_dims(p, y);
    std::vector<double> z(static_cast<std::size_t>(p.n()));
    std::vector<double> m(static_cast<std::size_t>(p.n()));
    for (int k = 0; k < p.num_blocks(); ++k) {
        double s = 0.0;
        for (int i = p.block_begin(k); i < p.block_end(k); ++i) s += y[i];
        const double avg = s / p.block_size(k);
        for (int i = p.block_begin(k); i < p.block_end(k); ++i) {
            z[static_cast<std::size_t>(i)] = avg;
            m[static_cast<std::size_t>(i)] = y[i] - avg;
        }
    }
    return {CartanVector::project(std::move(m)), CartanVector::project(std::move(z))};
}

bool has_zero_block_sums(const Partition& p, const CartanVector& y, double tol) {
    check_dims(p, y);
    for (int k = 0; k < p.num_blocks(); ++k) {
        double s = 0.0;
        for (int i = p.block_begin(k); i < p.block_end(k); ++i) s += y[i];
        if (std::abs(s) > tol) return false;
    }
    return true;
}

bool is_block_constant(const Partition& p, const CartanVector& y, double tol) {
    check_dims(p, y);
    for (int k = 0; k < p.num_blocks(); ++k)
        for (int i = p.block_begin(k) + 1; i < p.block_end(k); ++i)
            if (std::abs(y[i] - y[i - 1]) > tol) return false;
    return true;
}

bool in_chamber(const Partition& p, const CartanVector& aM, double tol) {
    check_dims(p, aM);
    for (int k = 0; k < p.num_blocks(); ++k)
        for (int i = p.block_begin(k) + 1; i < p.block_end(k); ++i)
            if (aM[i - 1] - aM[i] < -tol) return false;
    return true;
}

double rho_density(const Partition& p, const CartanVector& aM, const CartanVector& b) {
    check_dims(p, aM);
    check_dims(p, b);
    if (!has_zero_block_sums(p, aM)) throw ValidationError("rho_density: aM must have zero block sums");
    if (!is_block_constant(p, b)) throw ValidationError("rho_density: b must be constant on blocks");
    if (!in_chamber(p, aM)) throw ValidationError("rho_density: aM outside the closed chamber");

    double log_alpha = 0.0;
    double intra = 1.0;
    for (int i = 0; i < p.n(); ++i) {
        for (int j = i + 1; j < p.n(); ++j) {
            if (p.same_block(i, j)) {
                const double d = std::max(0.0, aM[i] - aM[j]);
                intra *= std::sinh(d);
            } else {
                log_alpha += b[i] - b[j];
            }
        }
    }
    return std::exp(log_alpha) * intra;
}

CartanVector v0(int n) {
    if (n < 2) throw ValidationError("v0: n must be at least 2");
    std::vector<double> e(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = n - 1 - 2 * i;
    return CartanVector::from_entries(std::move(e));
}

double p_norm(int n) {
    if (n < 2) throw ValidationError("p_norm: n must be at least 2");
    return std::sqrt(static_cast<double>(p_norm_squared_closed(n)));
}

std::int64_t p_norm_squared_sum(int n) {
    if (n < 1) throw ValidationError("p_norm: n must be positive");
    std::int64_t s = 0;
    for (std::int64_t i = 1; i <= n; ++i) {
        const std::int64_t t = n - 2 * i + 1;
        s += t * t;
    }
    return s;
}

std::int64_t p_norm_squared_closed(int n) {
    if (n < 1) throw ValidationError("p_norm: n must be positive");
    const std::int64_t N = n;
    return N * (N - 1) * (N + 1) / 3;
}

bool Cone::contains(const CartanVector& y, double tol) const {
    check_dims(partition, y);
    const double intra_floor = std::max(0.0, offset);
    for (int k = 0; k < partition.num_blocks(); ++k)
        for (int i = partition.block_begin(k) + 1; i < partition.block_end(k); ++i)
            if (y[i - 1] - y[i] < intra_floor - tol) return false;
    double prefix = 0.0;
    for (int k = 0; k + 1 < partition.num_blocks(); ++k) {
        for (int i = partition.block_begin(k); i < partition.block_end(k); ++i) prefix += y[i];
        if (prefix < offset - tol) return false;
    }
    return true;
}

} // namespace horocount
