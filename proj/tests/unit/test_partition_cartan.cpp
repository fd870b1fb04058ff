#include "horocount/cartan.hpp"
#include "horocount/errors.hpp"
#include "horocount/partition.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace horocount;

TEST_CASE("make_partition builds contiguous blocks") {
    const auto p = make_partition(3, {2, 1});
    CHECK(p.num_blocks() == 2);
    CHECK(p.block_indices(0) == std::vector<int>{0, 1});
    CHECK(p.block_indices(1) == std::vector<int>{2});
    CHECK(p.block_of(1) == 0);
    CHECK(p.block_of(2) == 1);
    CHECK(p.prefix_end(1) == 2);
    CHECK(p.off_block_pairs() == 2);
    CHECK(p.intra_block_pairs() == 1);
    CHECK(make_partition(3, {1, 1, 1}).off_block_pairs() == 3);
}

TEST_CASE("invalid partitions are rejected") {
    CHECK_THROWS_AS(make_partition(3, {3}), ValidationError);
    CHECK_THROWS_AS(make_partition(3, {1, 1}), ValidationError);
    CHECK_THROWS_AS(make_partition(3, {0, 3}), ValidationError);
    CHECK_THROWS_AS(parse_block_list("2,x"), ValidationError);
}

TEST_CASE("partition json round trip") {
    const auto p = make_partition(4, {1, 2, 1});
    CHECK(p.to_json() == "[1,2,1]");
    CHECK(Partition::from_json(p.to_json()) == p);
    CHECK(parse_block_list("2,1") == std::vector<int>{2, 1});
}

TEST_CASE("lambda of products") {
    const std::vector<double> d{2.0, 3.0, 1.0 / 6.0};
    const std::vector<int> i12{0, 1}, none{}, all{0, 1, 2};
    CHECK(lambda(d, i12) == doctest::Approx(6.0));
    CHECK(lambda(d, none) == 1.0);
    const std::vector<double> e{std::exp(1.0), std::exp(1.0), std::exp(-2.0)};
    CHECK(lambda(e, all) == doctest::Approx(1.0).epsilon(1e-15));

    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    for (int t = 0; t < 100; ++t) {
        const auto y = CartanVector::project({normal(rng), normal(rng), normal(rng), normal(rng)});
        const std::vector<int> a{0, 2}, b{1}, ab{0, 1, 2};
        CHECK(lambda(y, ab) == doctest::Approx(lambda(y, a) * lambda(y, b)).epsilon(1e-12));
    }
}

TEST_CASE("CartanVector stays traceless") {
    CHECK_THROWS_AS(CartanVector::from_entries({1.0, 1.0}), ValidationError);
    const auto y = CartanVector::from_entries({1.0, -0.25, -0.75});
    std::mt19937_64 rng(2);
    std::normal_distribution<double> normal;
    auto z = y;
    for (int t = 0; t < 50; ++t) {
        const auto w = CartanVector::project({normal(rng), normal(rng), normal(rng)});
        z = z * 1.7 + w - y * 0.3;
        CHECK(std::abs(z.sum()) <= 1e-12 * (1 + z.norm()));
    }
    CHECK(y.norm() == doctest::Approx(std::sqrt(1 + 0.0625 + 0.5625)));
}

TEST_CASE("block split is an orthogonal round trip") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    const auto p = make_partition(5, {2, 3});
    for (int t = 0; t < 100; ++t) {
        const auto y = CartanVector::project({normal(rng), normal(rng), normal(rng), normal(rng), normal(rng)});
        const auto s = split(p, y);
        CHECK(std::abs(s.aM.dot(s.aZ)) <= 1e-12);
        CHECK(has_zero_block_sums(p, s.aM));
        CHECK(is_block_constant(p, s.aZ));
        CHECK((s.aM + s.aZ - y).norm() <= 1e-12);
        const auto again = split(p, s.aM + s.aZ);
        CHECK((again.aM - s.aM).norm() <= 1e-12);
        CHECK((again.aZ - s.aZ).norm() <= 1e-12);
    }
}

TEST_CASE("rho density examples") {
    const auto p2 = make_partition(2, {1, 1});
    const double s = 0.7;
    CHECK(rho_density(p2, CartanVector(2), CartanVector::from_entries({s, -s})) == doctest::Approx(std::exp(2 * s)));

    const auto p3 = make_partition(3, {2, 1});
    const double t = 0.4;
    CHECK(rho_density(p3, CartanVector::from_entries({t, -t, 0}), CartanVector(3)) ==
          doctest::Approx((std::exp(2 * t) - std::exp(-2 * t)) / 2));
    CHECK(rho_density(p3, CartanVector(3), CartanVector::from_entries({0.5, 0.5, -1.0})) == 0.0);
    CHECK_THROWS_AS(rho_density(p3, CartanVector::from_entries({-t, t, 0}), CartanVector(3)), ValidationError);
}

TEST_CASE("v0 and its norm") {
    const auto v = v0(3);
    CHECK(v[0] == 2.0);
    CHECK(v[1] == 0.0);
    CHECK(v[2] == -2.0);
    CHECK(p_norm(3) * p_norm(3) == doctest::Approx(8.0));
    CHECK(p_norm(2) * p_norm(2) == doctest::Approx(2.0));
    CHECK(p_norm_squared_sum(4) == 20);
    for (int n = 1; n <= 50; ++n) {
        // Independent oracle: the defining sum written out here.
        std::int64_t direct = 0;
        for (int i = 1; i <= n; ++i) direct += static_cast<std::int64_t>(n - 2 * i + 1) * (n - 2 * i + 1);
        CHECK(p_norm_squared_closed(n) == direct);
        CHECK(p_norm_squared_sum(n) == direct);
    }
}

TEST_CASE("cone membership") {
    CHECK(Cone{make_partition(3, {1, 1, 1}), 0.0}.contains(v0(3)));
    CHECK_FALSE(Cone{make_partition(3, {2, 1}), 0.0}.contains(CartanVector::from_entries({0, 1, -1})));
    CHECK(Cone{make_partition(2, {1, 1}), -5.0}.contains(CartanVector::from_entries({-2, 2})));
}

TEST_CASE("cones are nested in their offset") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> normal;
    const auto p = make_partition(4, {2, 1, 1});
    for (int t = 0; t < 2000; ++t) {
        const auto y = CartanVector::project({2 * normal(rng), 2 * normal(rng), 2 * normal(rng), 2 * normal(rng)});
        const double c = -std::abs(normal(rng)), c2 = c - std::abs(normal(rng));
        if (Cone{p, c}.contains(y)) CHECK(Cone{p, c2}.contains(y));
    }
}
