#include "horocount/decompose.hpp"

#include "horocount/errors.hpp"

#include <cmath>
#include <vector>

namespace horocount::decompose {

namespace {

void check_square(const Matrix& g, const Partition& p) {
    if (g.rows() != g.cols()) throw ValidationError("matrix must be square");
    if (g.rows() != p.n()) throw ValidationError("matrix dimension does not match partition");
}

void check_unimodular(const Matrix& g) {
    const double d = g.determinant();
    const double scale = std::max(1.0, std::pow(g.norm(), static_cast<double>(g.rows())));
    if (std::abs(d - 1.0) > 1e-8 * scale) throw ValidationError("matrix is not in SL_N(R): det = " + std::to_string(d));
}

} // namespace

QrResult qr_positive(const Matrix& g) {
    if (g.rows() != g.cols()) throw ValidationError("qr_positive: matrix must be square");
    const Eigen::Index n = g.rows();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    const double scale = std::max(g.norm(), 1e-300);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(r(i, i)) <= 1e-14 * scale) throw ValidationError("qr_positive: singular matrix");
        if (r(i, i) < 0) {
            r.row(i) *= -1.0;
            q.col(i) *= -1.0;
        }
    }
    return {std::move(q), std::move(r)};
}

Matrix exp_diag(const CartanVector& y) {
    Matrix d = Matrix::Zero(y.n(), y.n());
    for (int i = 0; i < y.n(); ++i) d(i, i) = std::exp(y[i]);
    return d;
}

Matrix block_diagonal_part(const Matrix& x, const Partition& p) {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (int k = 0; k < p.num_blocks(); ++k) {
        const int s = p.block_begin(k), n = p.block_size(k);
        out.block(s, s, n, n) = x.block(s, s, n, n);
    }
    return out;
}

namespace {

struct LanglandsWithLevi {
    LanglandsParts parts;
    Matrix q;
    Matrix m;
};

LanglandsWithLevi langlands_impl(const Matrix& g, const Partition& p) {
    check_square(g, p);
    check_unimodular(g);
    auto [q, r] = qr_positive(g);
    const Matrix lambda = block_diagonal_part(r, p);

    std::vector<double> b(static_cast<std::size_t>(p.n()));
    for (int k = 0; k < p.num_blocks(); ++k) {
        double log_det = 0.0;
        for (int i = p.block_begin(k); i < p.block_end(k); ++i) log_det += std::log(r(i, i));
        for (int i = p.block_begin(k); i < p.block_end(k); ++i)
            b[static_cast<std::size_t>(i)] = log_det / p.block_size(k);
    }
    CartanVector bv = CartanVector::project(std::move(b));

    // u = Λ^{-1} r; Λ is upper triangular so this is a triangular solve.
    Matrix u = lambda.triangularView<Eigen::Upper>().solve(r);
    for (int k = 0; k < p.num_blocks(); ++k) {
        const int s = p.block_begin(k), n = p.block_size(k);
        u.block(s, s, n, n).setIdentity();
    }
    Matrix m = lambda * exp_diag(bv * -1.0);
    Matrix km = q * m;
    return {{std::move(km), std::move(bv), std::move(u)}, std::move(q), std::move(m)};
}

} // namespace

LanglandsParts langlands_decompose(const Matrix& g, const Partition& p) { return langlands_impl(g, p).parts; }

BlockCartan block_cartan(const Matrix& m, const Partition& p) {
    check_square(m, p);
    const int n = p.n();
    Matrix c1 = Matrix::Zero(n, n);
    Matrix c2 = Matrix::Zero(n, n);
    std::vector<double> a(static_cast<std::size_t>(n));
    for (int k = 0; k < p.num_blocks(); ++k) {
        const int s = p.block_begin(k), nk = p.block_size(k);
        const Matrix blk = m.block(s, s, nk, nk);
        const double d = blk.determinant();
        if (std::abs(d - 1.0) > 1e-8 * std::max(1.0, std::pow(blk.norm(), nk)))
            throw ValidationError("block_cartan: block determinant is not 1");
        Eigen::JacobiSVD<Matrix> svd(blk, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Matrix uu = svd.matrixU();
        Matrix vv = svd.matrixV();
        if (uu.determinant() < 0) {
            uu.col(nk - 1) *= -1.0;
            vv.col(nk - 1) *= -1.0;
        }
        c1.block(s, s, nk, nk) = uu;
        c2.block(s, s, nk, nk) = vv.transpose();
        const auto& sv = svd.singularValues();
        double log_sum = 0.0;
        for (int i = 0; i < nk; ++i) log_sum += std::log(sv(i));
        // Remove rounding drift so each block of aM sums to zero exactly.
        for (int i = 0; i < nk; ++i) a[static_cast<std::size_t>(s + i)] = std::log(sv(i)) - log_sum / nk;
    }
    return {std::move(c1), CartanVector::project(std::move(a)), std::move(c2)};
}

Matrix HorocycleFrame::reconstruct() const { return k * exp_diag(aM) * c * exp_diag(b) * u; }

HorocycleFrame horocycle_frame(const Matrix& g, const Partition& p) {
    auto lw = langlands_impl(g, p);
    auto kak = block_cartan(lw.m, p);
    HorocycleFrame f;
    f.k = lw.q * kak.c1;
    f.aM = std::move(kak.aM);
    f.c = std::move(kak.c2);
    f.b = std::move(lw.parts.b);
    f.u = std::move(lw.parts.u);
    f.height = std::sqrt(f.aM.dot(f.aM) + f.b.dot(f.b));
    return f;
}

double height(const Matrix& g, const Partition& p) { return horocycle_frame(g, p).height; }

bool is_block_unipotent(const Matrix& u, const Partition& p, double tol) {
    for (int i = 0; i < p.n(); ++i) {
        for (int j = 0; j < p.n(); ++j) {
            const int bi = p.block_of(i), bj = p.block_of(j);
            if (bi == bj) {
                if (std::abs(u(i, j) - (i == j ? 1.0 : 0.0)) > tol) return false;
            } else if (bi > bj && std::abs(u(i, j)) > tol) {
                return false;
            }
        }
    }
    return true;
}

bool is_block_orthogonal(const Matrix& c, const Partition& p, double tol) {
    if (!(block_diagonal_part(c, p) - c).isZero(tol)) return false;
    const Matrix id = Matrix::Identity(p.n(), p.n());
    if (!(c.transpose() * c - id).isZero(tol)) return false;
    for (int k = 0; k < p.num_blocks(); ++k) {
        const int s = p.block_begin(k), n = p.block_size(k);
        if (c.block(s, s, n, n).determinant() < 0) return false;
    }
    return true;
}

} // namespace horocount::decompose
