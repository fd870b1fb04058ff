#pragma once

#include "horocount/partition.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace horocount::measure {

/// Integration domains inside the traceless diagonal space, all cut by the
/// trace-form ball of radius R.
enum class Region {
    ball,     ///< closed chamber of a_M, b unrestricted (the full height ball)
    b_plus,   ///< the positive cone: chamber and nonnegative prefix sums
    bc_plus,  ///< the shifted cone with offset C ≤ 0
    annulus,  ///< b_plus(R) minus b_plus(εR)
};

enum class Method { monte_carlo, grid };

/// Which function is integrated.
enum class Density {
    haar,         ///< e^{<v0,y>} Π_{i<j same block} ½(1 - e^{-2(y_i - y_j)})
    exponential,  ///< e^{<v0,y>}
};

struct RegionSpec {
    Region region = Region::b_plus;
    double offset = 0.0;   ///< C, for bc_plus
    double epsilon = 0.5;  ///< ε, for annulus
};

std::string to_string(Region r);
std::string to_string(Method m);
Region parse_region(const std::string& text);

struct Budget {
    std::uint64_t samples = 1'000'000;  ///< Monte Carlo sample count
    double grid_step = 0.02;            ///< outer grid spacing
    double grid_tolerance = 0.0;        ///< > 0: halve the step until successive estimates agree to this
    std::uint64_t seed = 20240601;
    unsigned threads = 1;
};

struct QuadratureResult {
    double estimate = 0.0;
    double standard_error = 0.0;  ///< Monte Carlo standard error or |I(h) - I(2h)|
    std::uint64_t samples = 0;    ///< samples or grid lines
    double grid_step = 0.0;
    std::uint64_t seed = 0;
    Method method = Method::grid;
    std::string region;
};

/// μ_A of the region: the Haar density integrated in trace-form Lebesgue measure.
QuadratureResult mu_A_ball(const Partition& p, double radius, const RegionSpec& region, Method method,
                           const Budget& budget = {});

/// ∫ e^{<v0,y>} over the ball intersected with the cone of offset C.
QuadratureResult cone_integral(const Partition& p, double offset, double radius, Method method,
                               const Budget& budget = {});

/// Plain uniform sampling in the bounding box with rejection; slow, for small R.
QuadratureResult rejection_estimate(const Partition& p, double radius, const RegionSpec& region, Density density,
                                    std::uint64_t samples, std::uint64_t seed);

/// (1/2)^{Σ n_k(n_k-1)/2} (2πR/P_N)^{(N-2)/2} e^{P_N R}.
double closed_form_asymptotic(const Partition& p, double radius);

struct AsymRow {
    double radius = 0.0;
    double estimate = 0.0;
    double error = 0.0;
    double closed_form = 0.0;
    double ratio = 0.0;
    double ratio_error = 0.0;
};

struct AsymReport {
    std::vector<AsymRow> rows;
    double limit = 0.0;  ///< exp of the intercept of log(ratio) fitted against 1/R
    double slope = 0.0;
};

AsymReport asym_ratio_report(const Partition& p, std::span<const double> radii, Method method,
                             const Budget& budget = {});

struct WellRoundedMargin {
    double upper = 0.0;  ///< vol(B_{R+δ}) / vol(B_R)
    double lower = 0.0;  ///< vol(B_{R-δ}) / vol(B_R)
};

WellRoundedMargin well_rounded_margin(const Partition& p, double radius, double delta, Method method = Method::grid,
                                      const Budget& budget = {});

/// Tree summation.
double pairwise_sum(std::span<const double> values);

} // namespace horocount::measure
