#include "horocount/constants.hpp"

#include "horocount/cartan.hpp"
#include "horocount/errors.hpp"
#include "horocount/special.hpp"

#include <cmath>
#include <numbers>

namespace horocount::constants {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

double vol_so(int n) {
    if (n < 1) throw ValidationError("vol_so: n must be positive");
    double v = std::pow(2.0, n * (n - 1) / 4.0);
    for (int k = 2; k <= n; ++k) v *= special::sphere_area(k);
    return v;
}

double vol_so_recursive(int n) {
    if (n < 1) throw ValidationError("vol_so: n must be positive");
    double v = 1.0;
    for (int k = 2; k <= n; ++k) v = v * special::sphere_area(k) * std::pow(2.0, (k - 1) / 2.0);
    return v;
}

double vol_sl_mod(int n) {
    if (n < 2) throw ValidationError("vol_sl_mod: n must be at least 2");
    double v = 1.0;
    for (int k = 2; k <= n; ++k) v *= special::zeta(k);
    return v;
}

VolumeTable::VolumeTable(int max_n) {
    if (max_n < 2) throw ValidationError("VolumeTable: max_n must be at least 2");
    so_.assign(static_cast<std::size_t>(max_n) + 1, 0.0);
    sl_.assign(static_cast<std::size_t>(max_n) + 1, 0.0);
    for (int n = 1; n <= max_n; ++n) so_[static_cast<std::size_t>(n)] = constants::vol_so(n);
    for (int n = 2; n <= max_n; ++n) sl_[static_cast<std::size_t>(n)] = constants::vol_sl_mod(n);
}

double VolumeTable::vol_so(int n) const {
    if (n < 1 || n > max_n()) throw ValidationError("VolumeTable: n out of range");
    return so_[static_cast<std::size_t>(n)];
}

double VolumeTable::vol_sl_mod(int n) const {
    if (n < 2 || n > max_n()) throw ValidationError("VolumeTable: n out of range");
    return sl_[static_cast<std::size_t>(n)];
}

VolumeTable VolumeTable::with_scaled_so(int n, double factor) const {
    VolumeTable copy = *this;
    if (n < 1 || n > max_n()) throw ValidationError("VolumeTable: n out of range");
    copy.so_[static_cast<std::size_t>(n)] *= factor;
    return copy;
}

const VolumeTable& VolumeTable::shared() {
    static const VolumeTable table(16);
    return table;
}

double xi_identity_check(int n, const VolumeTable& table) {
    if (n < 2) throw ValidationError("xi_identity_check: n must be at least 2");
    const double lhs = table.vol_so(n) / table.vol_sl_mod(n);
    double xi_prod = 1.0;
    for (int k = 2; k <= n; ++k) xi_prod *= special::xi(k);
    const double rhs = std::pow(2.0, n * (n - 1) / 4.0) * factorial(n) * factorial(n - 1) / xi_prod;
    return std::abs(lhs / rhs - 1.0);
}

HaarConstants haar_constants(const Partition& p, const VolumeTable& table) {
    HaarConstants h;
    h.vol_k = table.vol_so(p.n());
    h.vol_k_i0 = 1.0;
    for (int s : p.sizes()) h.vol_k_i0 *= table.vol_so(s);
    const double half_pairs = p.off_block_pairs() / 2.0;
    h.c4 = h.vol_k / h.vol_k_i0 * std::pow(2.0, half_pairs);
    h.c6 = h.vol_k_i0 * h.vol_k_i0;
    h.c7 = h.vol_k * std::pow(2.0, -half_pairs);
    return h;
}

namespace {

double prefactor(int n) {
    const double pn = p_norm(n);
    return std::pow(0.5, n * (n - 1) / 2.0) * std::pow(2.0 * std::numbers::pi / pn, (n - 2) / 2.0);
}

} // namespace

CountingBreakdown counting_breakdown(const Partition& p, const VolumeTable& table) {
    CountingBreakdown out;
    const int n = p.n();
    out.haar = haar_constants(p, table);
    out.vol_sl = table.vol_sl_mod(n);
    out.pi0 = (1L << p.num_blocks()) - 1;
    out.so_z_order = 1.0;
    out.block_factor = 1.0;
    for (int s : p.sizes()) {
        const double order = factorial(s) * std::pow(2.0, s - 1);
        out.so_z_order *= order;
        out.block_factor *= table.vol_so(s) / order;
    }
    // Vol(U/U∩SL_N(Z)) = 1 since {E_ij} is trace-form orthonormal.
    out.ghor_covolume = out.block_factor;
    out.prefactor = prefactor(n);

    out.constant.n = n;
    out.constant.poly_numerator = n - 2;
    out.constant.exp_rate = p_norm(n);
    out.constant.coefficient =
        out.prefactor / static_cast<double>(out.pi0) * out.block_factor * out.haar.vol_k / out.vol_sl;
    return out;
}

CountingConstant counting_constant(const Partition& p, const VolumeTable& table) {
    return counting_breakdown(p, table).constant;
}

CountingConstant counting_constant_general(const Partition& p, double ghor_covolume, double g_covolume,
                                           const VolumeTable& table) {
    if (!(ghor_covolume > 0) || !(g_covolume > 0)) throw ValidationError("covolumes must be positive");
    const int n = p.n();
    const double k_bs_g = g_covolume / table.vol_so(n);
    const double pi0 = static_cast<double>((1L << p.num_blocks()) - 1);
    CountingConstant cc;
    cc.n = n;
    cc.poly_numerator = n - 2;
    cc.exp_rate = p_norm(n);
    cc.coefficient = prefactor(n) * (ghor_covolume / pi0) / k_bs_g;
    return cc;
}

double worked_example_coefficient(const Partition& p) {
    const double pi = std::numbers::pi;
    const double xi23 = special::xi(2) * special::xi(3);
    if (p.sizes() == std::vector<int>{1, 1, 1})
        return std::sqrt(pi) * 3.0 * std::pow(2.0, 0.25) / (7.0 * xi23);
    if (p.sizes() == std::vector<int>{2, 1})
        return std::pow(pi, 1.5) / (std::pow(2.0, 0.25) * xi23);
    throw ValidationError("no worked example for partition " + p.to_json());
}

double asymptotic_count(const CountingConstant& cc, double radius) {
    if (radius < 0) throw ValidationError("asymptotic_count: radius must be nonnegative");
    const double poly = cc.poly_numerator == 0 ? 1.0 : std::pow(radius, cc.poly_exponent());
    return cc.coefficient * poly * std::exp(cc.exp_rate * radius);
}

} // namespace horocount::constants
