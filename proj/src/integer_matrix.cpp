#include "horocount/integer_matrix.hpp"

#include "horocount/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace horocount {

namespace lattice {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw ResourceError("integer overflow in lattice arithmetic");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw ResourceError("integer overflow in lattice arithmetic");
    return r;
}

} // namespace lattice

using lattice::checked_add;
using lattice::checked_mul;

IntegerMatrix IntegerMatrix::identity(int n) {
    IntegerMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntegerMatrix IntegerMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    const int n = static_cast<int>(rows.size());
    IntegerMatrix m(n);
    for (int r = 0; r < n; ++r) {
        if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != n)
            throw ValidationError("IntegerMatrix: rows must form a square matrix");
        for (int c = 0; c < n; ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return m;
}

IntegerMatrix IntegerMatrix::elementary(int n, int i, int j, std::int64_t t) {
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) throw ValidationError("elementary: bad indices");
    IntegerMatrix m = identity(n);
    m(i, j) = t;
    return m;
}

std::vector<std::int64_t> IntegerMatrix::column(int c) const {
    std::vector<std::int64_t> v(static_cast<std::size_t>(n_));
    for (int r = 0; r < n_; ++r) v[static_cast<std::size_t>(r)] = (*this)(r, c);
    return v;
}

void IntegerMatrix::set_column(int c, const std::vector<std::int64_t>& v) {
    for (int r = 0; r < n_; ++r) (*this)(r, c) = v[static_cast<std::size_t>(r)];
}

void IntegerMatrix::add_row_multiple(int dst, int src, std::int64_t t) {
    for (int c = 0; c < n_; ++c) (*this)(dst, c) = checked_add((*this)(dst, c), checked_mul(t, (*this)(src, c)));
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& o) const {
    if (o.n_ != n_) throw ValidationError("IntegerMatrix: dimension mismatch");
    IntegerMatrix out(n_);
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) {
            std::int64_t s = 0;
            for (int k = 0; k < n_; ++k) s = checked_add(s, checked_mul((*this)(r, k), o(k, c)));
            out(r, c) = s;
        }
    return out;
}

std::int64_t IntegerMatrix::determinant() const {
    // Fraction-free Bareiss elimination.
    if (n_ == 0) return 1;
    std::vector<__int128> m(a_.begin(), a_.end());
    auto at = [&](int r, int c) -> __int128& { return m[static_cast<std::size_t>(r * n_ + c)]; };
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n_ - 1; ++k) {
        if (at(k, k) == 0) {
            int swap = -1;
            for (int r = k + 1; r < n_; ++r)
                if (at(r, k) != 0) {
                    swap = r;
                    break;
                }
            if (swap < 0) return 0;
            for (int c = 0; c < n_; ++c) std::swap(at(k, c), at(swap, c));
            sign = -sign;
        }
        for (int r = k + 1; r < n_; ++r)
            for (int c = k + 1; c < n_; ++c) at(r, c) = (at(r, c) * at(k, k) - at(r, k) * at(k, c)) / prev;
        prev = at(k, k);
    }
    const __int128 d = sign * at(n_ - 1, n_ - 1);
    if (d > INT64_MAX || d < INT64_MIN) throw ResourceError("determinant overflow");
    return static_cast<std::int64_t>(d);
}

IntegerMatrix IntegerMatrix::inverse_unimodular() const {
    const std::int64_t d = determinant();
    if (d != 1 && d != -1) throw ValidationError("inverse_unimodular: determinant is not ±1");
    IntegerMatrix inv(n_);
    if (n_ == 1) {
        inv(0, 0) = d;
        return inv;
    }
    IntegerMatrix minor(n_ - 1);
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) {
            for (int i = 0, mi = 0; i < n_; ++i) {
                if (i == r) continue;
                for (int j = 0, mj = 0; j < n_; ++j) {
                    if (j == c) continue;
                    minor(mi, mj++) = (*this)(i, j);
                }
                ++mi;
            }
            const std::int64_t cof = ((r + c) % 2 == 0 ? 1 : -1) * minor.determinant();
            inv(c, r) = cof * d;  // adj / det with det = ±1
        }
    return inv;
}

Eigen::MatrixXd IntegerMatrix::to_real() const {
    Eigen::MatrixXd m(n_, n_);
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) m(r, c) = static_cast<double>((*this)(r, c));
    return m;
}

std::string IntegerMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (int r = 0; r < n_; ++r) {
        os << (r ? ",[" : "[");
        for (int c = 0; c < n_; ++c) os << (c ? "," : "") << (*this)(r, c);
        os << ']';
    }
    os << ']';
    return os.str();
}

namespace lattice {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

void axpy(Vec& y, std::int64_t t, const Vec& x) {
    if (t == 0) return;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = checked_add(y[i], checked_mul(t, x[i]));
}

} // namespace

std::vector<Vec> hermite_normal_form(std::vector<Vec> rows) {
    if (rows.empty()) return rows;
    const std::size_t dim = rows.front().size();
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < dim && pivot_row < rows.size(); ++col) {
        // Euclid on column `col` among rows pivot_row.. until a single nonzero remains.
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t r = pivot_row; r < rows.size(); ++r)
                if (rows[r][col] != 0 && (best == rows.size() || std::llabs(rows[r][col]) < std::llabs(rows[best][col])))
                    best = r;
            if (best == rows.size()) break;
            std::swap(rows[pivot_row], rows[best]);
            bool done = true;
            for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
                if (rows[r][col] == 0) continue;
                axpy(rows[r], -(rows[r][col] / rows[pivot_row][col]), rows[pivot_row]);
                if (rows[r][col] != 0) done = false;
            }
            if (done) break;
        }
        if (rows[pivot_row][col] == 0) continue;
        if (rows[pivot_row][col] < 0)
            for (auto& x : rows[pivot_row]) x = -x;
        const std::int64_t piv = rows[pivot_row][col];
        for (std::size_t r = 0; r < pivot_row; ++r) axpy(rows[r], -floor_div(rows[r][col], piv), rows[pivot_row]);
        ++pivot_row;
    }
    rows.resize(pivot_row);
    return rows;
}

Vec reduce_modulo(Vec v, const std::vector<Vec>& hnf) {
    for (const auto& row : hnf) {
        std::size_t p = 0;
        while (p < row.size() && row[p] == 0) ++p;
        if (p == row.size()) continue;
        axpy(v, -floor_div(v[p], row[p]), row);
    }
    return v;
}

Vec reduce_up_to_sign(const Vec& v, const std::vector<Vec>& hnf) {
    Vec plus = reduce_modulo(v, hnf);
    Vec neg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
    Vec minus = reduce_modulo(std::move(neg), hnf);
    return std::min(plus, minus);
}

namespace {

__int128 small_det(std::vector<__int128> m, int n) {
    __int128 prev = 1;
    int sign = 1;
    auto at = [&](int r, int c) -> __int128& { return m[static_cast<std::size_t>(r * n + c)]; };
    for (int k = 0; k < n - 1; ++k) {
        if (at(k, k) == 0) {
            int swap = -1;
            for (int r = k + 1; r < n; ++r)
                if (at(r, k) != 0) {
                    swap = r;
                    break;
                }
            if (swap < 0) return 0;
            for (int c = 0; c < n; ++c) std::swap(at(k, c), at(swap, c));
            sign = -sign;
        }
        for (int r = k + 1; r < n; ++r)
            for (int c = k + 1; c < n; ++c) at(r, c) = (at(r, c) * at(k, k) - at(r, k) * at(k, c)) / prev;
        prev = at(k, k);
    }
    return sign * at(n - 1, n - 1);
}

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

std::int64_t minor_gcd(const std::vector<Vec>& vectors) {
    const int m = static_cast<int>(vectors.size());
    if (m == 0) return 1;
    const int dim = static_cast<int>(vectors.front().size());
    if (m > dim) return 0;
    std::vector<int> rows(static_cast<std::size_t>(m));
    std::iota(rows.begin(), rows.end(), 0);
    __int128 g = 0;
    while (true) {
        std::vector<__int128> sub(static_cast<std::size_t>(m * m));
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
                sub[static_cast<std::size_t>(r * m + c)] = vectors[static_cast<std::size_t>(c)][static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])];
        g = gcd128(g, small_det(std::move(sub), m));
        if (g == 1) return 1;
        // next combination of m row indices out of dim
        int i = m - 1;
        while (i >= 0 && rows[static_cast<std::size_t>(i)] == dim - m + i) --i;
        if (i < 0) break;
        ++rows[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j) rows[static_cast<std::size_t>(j)] = rows[static_cast<std::size_t>(j - 1)] + 1;
    }
    if (g > INT64_MAX) throw ResourceError("minor gcd overflow");
    return static_cast<std::int64_t>(g);
}

__int128 gram_determinant(const std::vector<Vec>& vectors) {
    const int m = static_cast<int>(vectors.size());
    if (m == 0) return 1;
    std::vector<__int128> g(static_cast<std::size_t>(m * m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            __int128 s = 0;
            const auto& a = vectors[static_cast<std::size_t>(i)];
            const auto& b = vectors[static_cast<std::size_t>(j)];
            for (std::size_t k = 0; k < a.size(); ++k) s += static_cast<__int128>(a[k]) * b[k];
            g[static_cast<std::size_t>(i * m + j)] = s;
        }
    return small_det(std::move(g), m);
}

Vec bezout(const Vec& a, std::int64_t& gcd_out) {
    // Maintain g = Σ a_i x_i while folding in one coefficient at a time.
    Vec x(a.size(), 0);
    std::int64_t g = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        if (g == 0) {
            g = a[i];
            x[i] = 1;
            continue;
        }
        // extended gcd of (g, a[i])
        std::int64_t old_r = g, r = a[i], old_s = 1, s = 0, old_t = 0, t = 1;
        while (r != 0) {
            const std::int64_t q = old_r / r;
            std::int64_t tmp = old_r - q * r;
            old_r = r;
            r = tmp;
            tmp = old_s - q * s;
            old_s = s;
            s = tmp;
            tmp = old_t - q * t;
            old_t = t;
            t = tmp;
        }
        for (std::size_t j = 0; j < i; ++j) x[j] = checked_mul(x[j], old_s);
        x[i] = old_t;
        g = old_r;
    }
    if (g < 0) {
        g = -g;
        for (auto& v : x) v = -v;
    }
    gcd_out = g;
    return x;
}

} // namespace lattice

} // namespace horocount
