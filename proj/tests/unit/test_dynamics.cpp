#include "horocount/cartan.hpp"
#include "horocount/dynamics.hpp"
#include "horocount/errors.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace horocount;
using namespace horocount::dynamics;

namespace {

lattice::Vec unit(int n, int i) {
    lattice::Vec v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(i)] = 1;
    return v;
}

/// Coarse partition read off from concrete instances: a prefix is a cut
/// exactly when its covolume does not move along the sequence.
std::vector<int> coarse_from_instances(const CleanSequenceSpec& spec) {
    const Partition& p = spec.partition;
    const auto i1 = instantiate(spec, 1.0), i2 = instantiate(spec, 2.0);
    std::vector<int> sizes;
    int start = 0;
    for (int k = 1; k <= p.num_blocks(); ++k) {
        const double c1 = covolume(p, i1.a, i1.b, k), c2 = covolume(p, i2.a, i2.b, k);
        if (std::abs(c1 - c2) <= 1e-9 * std::max(c1, c2)) {
            sizes.push_back(p.prefix_end(k) - start);
            start = p.prefix_end(k);
        }
    }
    return sizes;
}

} // namespace

TEST_CASE("identity behaviour keeps the partition") {
    const auto p = make_partition(3, {2, 1});
    const auto r = classify_limit({p, {ABehavior::identity, ABehavior::identity},
                                   {BBehavior::constant_one, BBehavior::constant_one}});
    CHECK(r.nondivergent);
    CHECK(r.coarse_sizes() == std::vector<int>{2, 1});
    CHECK(r.blocks[0].origin == Origin::old_identity);
    CHECK(r.blocks[0].role == Role::K);
    CHECK(r.to_json() ==
          R"({"blocks":[{"indices":[0,1],"members":[0],"origin":"old_identity","role":"K"},{"indices":[2],"members":[1],"origin":"old_identity","role":"K"}],"coarse_partition":[2,1],"nondivergent":true})");
}

TEST_CASE("an escaping prefix merges blocks") {
    const auto p = make_partition(2, {1, 1});
    const auto r = classify_limit({p, {ABehavior::identity, ABehavior::identity},
                                   {BBehavior::to_infinity, BBehavior::constant_one}});
    CHECK(r.nondivergent);
    REQUIRE(r.blocks.size() == 1);
    CHECK(r.coarse_sizes() == std::vector<int>{2});
    CHECK(r.blocks[0].members == std::vector<int>{0, 1});
    CHECK(r.blocks[0].origin == Origin::merged);
    CHECK(r.blocks[0].role == Role::M);
}

TEST_CASE("a shrinking prefix diverges") {
    const auto p = make_partition(2, {1, 1});
    const auto r = classify_limit({p, {ABehavior::identity, ABehavior::identity},
                                   {BBehavior::to_zero, BBehavior::constant_one}});
    CHECK_FALSE(r.nondivergent);
    CHECK(r.blocks.empty());
    CHECK(r.to_json() == R"({"nondivergent":false})");
}

TEST_CASE("unbounded M-part on a kept block") {
    const auto p = make_partition(3, {2, 1});
    const auto r = classify_limit({p, {ABehavior::unbounded, ABehavior::identity},
                                   {BBehavior::constant_one, BBehavior::constant_one}});
    CHECK(r.blocks[0].origin == Origin::old_unbounded);
    CHECK(r.blocks[0].role == Role::M);
    CHECK(r.blocks[1].role == Role::K);
}

TEST_CASE("stable subspaces are the proper prefixes") {
    CHECK(stable_subspaces(make_partition(3, {1, 1, 1})) == std::vector<std::vector<int>>{{0}, {0, 1}});
    CHECK(stable_subspaces(make_partition(4, {2, 2})) == std::vector<std::vector<int>>{{0, 1}});
    CHECK(stable_subspaces(make_partition(4, {1, 2, 1})) == std::vector<std::vector<int>>{{0}, {0, 1, 2}});
}

TEST_CASE("covolume closed form") {
    const auto p = make_partition(2, {1, 1});
    const double t = 0.7;
    const std::vector<double> a{1.0, 1.0}, b{std::exp(-t), std::exp(t)};
    CHECK(covolume(p, a, b, 1) == doctest::Approx(std::exp(-t)));
    CHECK(covolume(p, a, b, 2) == doctest::Approx(1.0));
    CHECK(covolume(p, a, b, 0) == doctest::Approx(1.0));
    const std::vector<double> bad_a{2.0, 1.0};
    CHECK_THROWS_AS(covolume(make_partition(2, {1, 1}), bad_a, b, 1), ValidationError);
    const std::vector<double> bad_b{1.0, 2.0, 0.5};
    CHECK_THROWS_AS(covolume(make_partition(3, {2, 1}), std::vector<double>{1, 1, 1}, bad_b, 1), ValidationError);
}

TEST_CASE("covolume agrees with the Gram determinant under block rotations") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    const auto specs = enumerate_clean_specs(4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto& spec = specs[static_cast<std::size_t>(trial * 7) % specs.size()];
        const Partition& p = spec.partition;
        const auto inst = instantiate(spec, 0.3 + 0.01 * trial);
        const int n = p.n();
        Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
        for (int blk = 0; blk < p.num_blocks(); ++blk) {
            const int s = p.block_size(blk);
            Eigen::MatrixXd m(s, s);
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j) m(i, j) = normal(rng);
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
            k.block(p.block_begin(blk), p.block_begin(blk), s, s) = qr.householderQ();
        }
        Eigen::MatrixXd g = k * Eigen::VectorXd::Map(inst.a.data(), n).asDiagonal() *
                            Eigen::VectorXd::Map(inst.b.data(), n).asDiagonal();
        for (int pre = 1; pre <= p.num_blocks(); ++pre) {
            std::vector<lattice::Vec> basis;
            for (int i = 0; i < p.prefix_end(pre); ++i) basis.push_back(unit(n, i));
            const double closed = covolume(p, inst.a, inst.b, pre);
            CHECK(std::abs(covolume_gram(g, basis) - closed) <= 1e-12 * std::max(1.0, closed));
        }
    }
}

TEST_CASE("clean specification census") {
    const auto specs = enumerate_clean_specs(4);
    CHECK(specs.size() == 129);
    int nondiv = 0;
    for (const auto& s : specs) nondiv += classify_limit(s).nondivergent ? 1 : 0;
    CHECK(nondiv == 62);
    CHECK(enumerate_clean_specs(2).size() == 3);
}

TEST_CASE("classification matches concrete sequences") {
    for (const auto& spec : enumerate_clean_specs(4)) {
        const auto r = classify_limit(spec);
        const auto i1 = instantiate(spec, 1.0), i2 = instantiate(spec, 5.0);
        double least = 1.0;
        for (int k = 1; k <= spec.partition.num_blocks(); ++k)
            least = std::min(least, covolume(spec.partition, i2.a, i2.b, k));
        CHECK(r.nondivergent == (least > 0.5));
        if (!r.nondivergent) continue;
        CHECK(r.coarse_sizes() == coarse_from_instances(spec));
        int total = 0;
        for (const auto& b : r.blocks) {
            CHECK(b.begin == total);
            total = b.end;
        }
        CHECK(total == spec.partition.n());
        (void)i1;
    }
}

TEST_CASE("coarsening a coarse partition is idempotent") {
    for (const auto& spec : enumerate_clean_specs(4)) {
        const auto r = classify_limit(spec);
        if (!r.nondivergent || r.blocks.size() < 2) continue;
        const Partition coarse(spec.partition.n(), r.coarse_sizes());
        CleanSequenceSpec again{coarse, std::vector<ABehavior>(r.blocks.size(), ABehavior::identity),
                                std::vector<BBehavior>(r.blocks.size(), BBehavior::constant_one)};
        CHECK(classify_limit(again).coarse_sizes() == r.coarse_sizes());
    }
}

TEST_CASE("validation") {
    const auto p = make_partition(3, {2, 1});
    CHECK_THROWS_AS(classify_limit({p, {ABehavior::identity}, {BBehavior::constant_one, BBehavior::constant_one}}),
                    ValidationError);
    CHECK_THROWS_AS(classify_limit({p, {ABehavior::identity, ABehavior::identity},
                                    {BBehavior::constant_one, BBehavior::to_zero}}),
                    ValidationError);
    CHECK_THROWS_AS(classify_limit({p, {ABehavior::identity, ABehavior::unbounded},
                                    {BBehavior::constant_one, BBehavior::constant_one}}),
                    ValidationError);
    CHECK(parse_a_behavior("inf") == ABehavior::unbounded);
    CHECK(parse_b_behavior("0") == BBehavior::to_zero);
    CHECK_THROWS_AS(parse_b_behavior("sideways"), ValidationError);
}
