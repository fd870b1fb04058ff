#include "horocount/decompose.hpp"
#include "horocount/errors.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace horocount;
using decompose::Matrix;

namespace {

Matrix random_sl(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    if (a.determinant() < 0) a.row(0) *= -1.0;
    return a / std::pow(a.determinant(), 1.0 / n);
}

Matrix random_rotation(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    Matrix q = Eigen::HouseholderQR<Matrix>(a).householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
}

/// N = 2 height as a distance minimisation over the horocycle:
/// min over x of sqrt(2)·log σ1(g·[[1,x],[0,1]]), by ternary search.
double geodesic_oracle(const Matrix& g) {
    auto f = [&](double x) {
        Matrix u(2, 2);
        u << 1, x, 0, 1;
        return std::sqrt(2.0) * std::log(Eigen::JacobiSVD<Matrix>(g * u).singularValues()(0));
    };
    double lo = -50, hi = 50;
    for (int i = 0; i < 400; ++i) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        (f(m1) < f(m2) ? hi : lo) = (f(m1) < f(m2) ? m2 : m1);
    }
    return f(0.5 * (lo + hi));
}

} // namespace

TEST_CASE("qr_positive examples") {
    const auto id = decompose::qr_positive(Matrix::Identity(3, 3));
    CHECK((id.q - Matrix::Identity(3, 3)).norm() < 1e-14);
    CHECK((id.r - Matrix::Identity(3, 3)).norm() < 1e-14);

    Matrix d(2, 2);
    d << 2, 0, 0, 0.5;
    const auto qd = decompose::qr_positive(d);
    CHECK((qd.q - Matrix::Identity(2, 2)).norm() < 1e-14);
    CHECK((qd.r - d).norm() < 1e-14);

    Matrix w(2, 2);
    w << 0, -1, 1, 0;
    const auto qw = decompose::qr_positive(w);
    CHECK((qw.q - w).norm() < 1e-14);
    CHECK((qw.r - Matrix::Identity(2, 2)).norm() < 1e-14);
    CHECK((qw.q.transpose() * qw.q - Matrix::Identity(2, 2)).norm() < 1e-12);
    CHECK_THROWS_AS(decompose::qr_positive(Matrix::Zero(2, 2)), ValidationError);
}

TEST_CASE("langlands examples") {
    const auto p = make_partition(3, {2, 1});
    const auto b0 = CartanVector::from_entries({0.3, 0.3, -0.6});
    const auto lp = decompose::langlands_decompose(decompose::exp_diag(b0), p);
    CHECK((lp.b - b0).norm() < 1e-12);
    CHECK((lp.u - Matrix::Identity(3, 3)).norm() < 1e-12);
    CHECK((lp.km - Matrix::Identity(3, 3)).norm() < 1e-12);

    Matrix u = Matrix::Identity(3, 3);
    u(0, 2) = 1.5;
    u(1, 2) = -2.0;
    const auto lu = decompose::langlands_decompose(u, p);
    CHECK(lu.b.norm() < 1e-12);
    CHECK((lu.u - u).norm() < 1e-12);

    Matrix g(2, 2);
    g << 1, 0, 1, 1;
    const auto l2 = decompose::langlands_decompose(g, make_partition(2, {1, 1}));
    CHECK(l2.b[0] == doctest::Approx(0.5 * std::log(2.0)));
    CHECK(l2.b[1] == doctest::Approx(-0.5 * std::log(2.0)));
    CHECK((l2.km * decompose::exp_diag(l2.b) * l2.u - g).norm() < 1e-12);
}

TEST_CASE("block cartan against eigenvalues of mTm") {
    const auto p = make_partition(5, {3, 2});
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        Matrix m = Matrix::Zero(5, 5);
        m.block(0, 0, 3, 3) = random_sl(3, rng);
        m.block(3, 3, 2, 2) = random_sl(2, rng);
        const auto bc = decompose::block_cartan(m, p);
        CHECK((bc.c1 * decompose::exp_diag(bc.aM) * bc.c2 - m).norm() <= 1e-10 * m.norm());
        CHECK(decompose::is_block_orthogonal(bc.c1, p));
        CHECK(decompose::is_block_orthogonal(bc.c2, p));
        CHECK(in_chamber(p, bc.aM));
        for (int k = 0; k < 2; ++k) {
            const int b = p.block_begin(k), s = p.block_size(k);
            const Matrix blk = m.block(b, b, s, s);
            Eigen::SelfAdjointEigenSolver<Matrix> es(blk.transpose() * blk);
            auto ev = es.eigenvalues();  // ascending
            for (int i = 0; i < s; ++i) CHECK(std::exp(2 * bc.aM[b + i]) == doctest::Approx(ev(s - 1 - i)).epsilon(1e-9));
        }
    }
    Matrix d = Matrix::Identity(3, 3);
    d(0, 0) = 0.5;
    d(1, 1) = 2.0;
    const auto bd = decompose::block_cartan(d, make_partition(3, {2, 1}));
    CHECK(bd.aM[0] == doctest::Approx(std::log(2.0)));
    CHECK(bd.aM[1] == doctest::Approx(-std::log(2.0)));
}

TEST_CASE("height examples") {
    const auto p2 = make_partition(2, {1, 1});
    CHECK(decompose::height(Matrix::Identity(2, 2), p2) == doctest::Approx(0.0));
    const double t = 1.3;
    Matrix a(2, 2);
    a << std::exp(t), 0, 0, std::exp(-t);
    CHECK(decompose::height(a, p2) == doctest::Approx(std::sqrt(2.0) * t));
    Matrix g(2, 2);
    g << 1, 0, 1, 1;
    CHECK(std::abs(decompose::height(g, p2) - std::log(2.0) / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(decompose::height(g, p2) - geodesic_oracle(g)) < 1e-9);

    std::mt19937_64 rng(6);
    for (int i = 0; i < 20; ++i) {
        const Matrix r = random_sl(2, rng);
        CHECK(std::abs(decompose::height(r, p2) - geodesic_oracle(r)) < 1e-8);
    }
}

TEST_CASE("frame properties on random matrices") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> normal;
    for (const auto& sizes : {std::vector<int>{1, 1, 1}, std::vector<int>{2, 1}, std::vector<int>{1, 2, 1}, std::vector<int>{2, 2}}) {
        int n = 0;
        for (int s : sizes) n += s;
        const Partition p(n, sizes);
        for (int t = 0; t < 200; ++t) {
            const Matrix g = random_sl(n, rng);
            const auto f = decompose::horocycle_frame(g, p);
            CHECK((f.reconstruct() - g).norm() <= 1e-9 * g.norm());
            CHECK((f.k.transpose() * f.k - Matrix::Identity(n, n)).norm() < 1e-10);
            CHECK(decompose::is_block_orthogonal(f.c, p));
            CHECK(decompose::is_block_unipotent(f.u, p));
            CHECK(in_chamber(p, f.aM, 1e-10));
            CHECK(f.height >= 0.0);

            // right invariance under block rotations times block unipotents
            Matrix c = Matrix::Zero(n, n), u = Matrix::Identity(n, n);
            for (int k = 0; k < p.num_blocks(); ++k)
                c.block(p.block_begin(k), p.block_begin(k), p.block_size(k), p.block_size(k)) = random_rotation(p.block_size(k), rng);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (p.block_of(i) < p.block_of(j)) u(i, j) = normal(rng);
            CHECK(std::abs(decompose::height(g * c * u, p) - f.height) < 1e-9);
            CHECK(std::abs(decompose::height(random_rotation(n, rng) * g, p) - f.height) < 1e-9);

            // b additivity under right multiplication by A_{I0}
            std::vector<double> bz(static_cast<std::size_t>(n));
            for (int k = 0; k < p.num_blocks(); ++k)
                for (int i = p.block_begin(k); i < p.block_end(k); ++i) bz[static_cast<std::size_t>(i)] = 0.3 * (k + 1);
            const auto b1 = split(p, CartanVector::project(bz)).aZ;
            const auto l1 = decompose::langlands_decompose(g * decompose::exp_diag(b1), p);
            const auto l0 = decompose::langlands_decompose(g, p);
            CHECK((l1.b - (l0.b + b1)).norm() < 1e-9);
        }
    }
}

TEST_CASE("height of m·u dominates height of m") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> normal;
    const auto p = make_partition(4, {2, 1, 1});
    for (int t = 0; t < 200; ++t) {
        Matrix m = Matrix::Zero(4, 4);
        m.block(0, 0, 2, 2) = random_sl(2, rng) * std::exp(normal(rng));
        m(2, 2) = std::exp(normal(rng));
        m(3, 3) = 1.0 / (m.block(0, 0, 2, 2).determinant() * m(2, 2));
        Matrix u = Matrix::Identity(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (p.block_of(i) < p.block_of(j)) u(i, j) = normal(rng);
        CHECK(decompose::height(m * u, p) >= decompose::height(m, p) - 1e-9);
    }
}
