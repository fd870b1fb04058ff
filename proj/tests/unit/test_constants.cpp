#include "horocount/constants.hpp"
#include "horocount/errors.hpp"
#include "horocount/special.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace horocount;
using std::numbers::pi;

namespace {

double zeta_series(int s) {
    // Oracle: plain partial sums with an integral tail estimate.
    double sum = 0.0;
    const int terms = 2'000'000;
    for (int k = terms; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
    return sum + std::pow(terms + 0.5, 1.0 - s) / (s - 1.0);
}

} // namespace

TEST_CASE("zeta and xi special values") {
    CHECK(special::zeta(2) == doctest::Approx(pi * pi / 6).epsilon(1e-15));
    CHECK(special::zeta(4) == doctest::Approx(std::pow(pi, 4) / 90).epsilon(1e-15));
    for (int s = 2; s <= 12; ++s) {
        CHECK(special::zeta(s) == doctest::Approx(std::riemann_zeta(static_cast<double>(s))).epsilon(1e-14));
        CHECK(special::zeta(s) == doctest::Approx(zeta_series(s)).epsilon(1e-12));
    }
    CHECK(special::xi(2) == doctest::Approx(pi / 6).epsilon(1e-14));
    CHECK(special::xi(3) == doctest::Approx(1.5 / pi * std::riemann_zeta(3.0)).epsilon(1e-14));
    CHECK(special::xi(4) == doctest::Approx(6.0 / (pi * pi) * std::riemann_zeta(4.0)).epsilon(1e-14));
    CHECK(special::gamma(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-15));
}

TEST_CASE("volumes of SO_n and of SL_n(R)/SL_n(Z)") {
    CHECK(constants::vol_so(1) == 1.0);
    CHECK(constants::vol_so(2) == doctest::Approx(2 * std::sqrt(2.0) * pi).epsilon(1e-14));
    CHECK(constants::vol_so(3) == doctest::Approx(16 * std::sqrt(2.0) * pi * pi).epsilon(1e-14));
    for (int n = 1; n <= 12; ++n)
        CHECK(std::abs(constants::vol_so_recursive(n) / constants::vol_so(n) - 1) <= 1e-12);
    CHECK(constants::vol_sl_mod(2) == doctest::Approx(pi * pi / 6).epsilon(1e-14));
    CHECK(constants::vol_sl_mod(3) == doctest::Approx(std::riemann_zeta(2.0) * std::riemann_zeta(3.0)).epsilon(1e-14));
    CHECK(constants::vol_sl_mod(4) ==
          doctest::Approx(std::riemann_zeta(2.0) * std::riemann_zeta(3.0) * std::riemann_zeta(4.0)).epsilon(1e-14));
}

TEST_CASE("xi identity and fault injection") {
    CHECK(constants::xi_identity_check(2) <= 1e-10);
    CHECK(constants::xi_identity_check(3) <= 1e-10);
    CHECK(constants::xi_identity_check(6) <= 1e-9);
    for (int n = 2; n <= 8; ++n) CHECK(constants::xi_identity_check(n) <= 1e-9);
    const auto corrupted = constants::VolumeTable::shared().with_scaled_so(4, 1.001);
    CHECK(constants::xi_identity_check(4, corrupted) > 1e-4);
    CHECK(constants::xi_identity_check(3, corrupted) <= 1e-9);
}

TEST_CASE("Haar constants") {
    const double vk = constants::vol_so(3);
    CHECK(constants::haar_constants(make_partition(3, {1, 1, 1})).c7 == doctest::Approx(vk * std::pow(2.0, -1.5)));
    CHECK(constants::haar_constants(make_partition(3, {2, 1})).c7 == doctest::Approx(vk * 0.5));
    CHECK(constants::haar_constants(make_partition(2, {1, 1})).c6 == doctest::Approx(1.0));
}

TEST_CASE("counting constants of the worked examples") {
    const double x2 = special::xi(2), x3 = special::xi(3);
    const auto e1 = constants::counting_constant(make_partition(3, {1, 1, 1}));
    CHECK(e1.poly_exponent() == 0.5);
    CHECK(std::abs(e1.exp_rate * e1.exp_rate - 8.0) <= 1e-12);
    CHECK(std::abs(e1.coefficient / (std::sqrt(pi) * 3 * std::pow(2.0, 0.25) / (7 * x2 * x3)) - 1) <= 1e-12);

    const auto e2 = constants::counting_constant(make_partition(3, {2, 1}));
    CHECK(e2.poly_exponent() == 0.5);
    CHECK(std::abs(e2.coefficient / (std::pow(pi, 1.5) / (std::pow(2.0, 0.25) * x2 * x3)) - 1) <= 1e-12);

    const auto n2 = constants::counting_constant(make_partition(2, {1, 1}));
    CHECK(n2.poly_exponent() == 0.0);
    CHECK(n2.exp_rate == doctest::Approx(std::sqrt(2.0)));
    CHECK(n2.coefficient == doctest::Approx(2 * std::sqrt(2.0) / pi).epsilon(1e-14));

    CHECK_THROWS_AS(constants::worked_example_coefficient(make_partition(2, {1, 1})), ValidationError);
}

TEST_CASE("general-lattice form reduces to the SL_N(Z) value") {
    for (const auto& sizes : {std::vector<int>{1, 1}, std::vector<int>{1, 1, 1}, std::vector<int>{2, 1},
                              std::vector<int>{1, 3}, std::vector<int>{2, 2, 1}}) {
        int n = 0;
        for (int s : sizes) n += s;
        const Partition p(n, sizes);
        // Vol(G_hor/G_hor∩Γ) = Vol(K_{I0}) / Π n_k! 2^{n_k-1}, with Vol(U/U(Z)) = 1.
        double ghor = 1.0;
        for (int s : sizes) ghor *= constants::vol_so(s) / (std::tgamma(s + 1.0) * std::pow(2.0, s - 1));
        const auto general = constants::counting_constant_general(p, ghor, constants::vol_sl_mod(n));
        const auto direct = constants::counting_constant(p);
        CHECK(std::abs(general.coefficient / direct.coefficient - 1) <= 1e-12);
    }
}

TEST_CASE("asymptotic count") {
    const auto e1 = constants::counting_constant(make_partition(3, {1, 1, 1}));
    CHECK(constants::asymptotic_count(e1, 0.0) == 0.0);
    const auto n2 = constants::counting_constant(make_partition(2, {1, 1}));
    CHECK(constants::asymptotic_count(n2, 1.0) == doctest::Approx(2 * std::sqrt(2.0) / pi * std::exp(std::sqrt(2.0))));
    CHECK(constants::asymptotic_count(n2, 1.0) == doctest::Approx(3.7033).epsilon(1e-4));
    CHECK(constants::asymptotic_count(n2, 3.0) / constants::asymptotic_count(n2, 2.0) ==
          doctest::Approx(std::exp(n2.exp_rate)));
}
