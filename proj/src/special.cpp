#include "horocount/special.hpp"

#include "horocount/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace horocount::special {

namespace {

// B_{2j} / (2j)! for j = 1..8
constexpr std::array<double, 8> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
};

constexpr int kCutoff = 20;

} // namespace

double zeta(double s) {
    if (!(s > 1.0)) throw ValidationError("zeta: requires s > 1");
    double head = 0.0;
    for (int n = kCutoff - 1; n >= 1; --n) head += std::pow(static_cast<double>(n), -s);

    const double m = kCutoff;
    double tail = std::pow(m, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(m, -s);
    // rising factorial s(s+1)...(s+2j-2) times M^{-s-2j+1}
    double rising = s;
    double mpow = std::pow(m, -s - 1.0);
    for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
        tail += kBernoulliOverFactorial[j] * rising * mpow;
        const double a = s + 2.0 * static_cast<double>(j) + 1.0;
        rising *= a * (a + 1.0);
        mpow /= m * m;
    }
    return head + tail;
}

double gamma(double x) { return std::tgamma(x); }

double xi(double s) {
    if (!(s > 1.0)) throw ValidationError("xi: requires s > 1");
    return 0.5 * s * (s - 1.0) * std::pow(std::numbers::pi, -s / 2.0) * gamma(s / 2.0) * zeta(s);
}

double sphere_area(int k) {
    if (k < 1) throw ValidationError("sphere_area: dimension must be positive");
    return 2.0 * std::pow(std::numbers::pi, k / 2.0) / gamma(k / 2.0);
}

} // namespace horocount::special
