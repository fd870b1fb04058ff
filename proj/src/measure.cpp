#include "horocount/measure.hpp"

#include "horocount/cartan.hpp"
#include "horocount/errors.hpp"
#include "horocount/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace horocount::measure {

namespace {

// 8-point Gauss–Legendre on [-1, 1].
constexpr std::array<double, 4> kGlNodes{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                         0.9602898564975363};
constexpr std::array<double, 4> kGlWeights{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                           0.1012285362903763};
constexpr double kPanel = 0.25;
constexpr std::size_t kChunks = 64;

/// Half-space t·at + <w, aw> ≥ beta in the coordinates y = t·v̂0 + E·w.
struct HalfSpace {
    double at;
    Eigen::VectorXd aw;
    double beta;
};

/// The integrand and domain in adapted coordinates.
class Problem {
public:
    Problem(const Partition& p, double radius, const RegionSpec& spec, Density density)
        : p_(p), radius_(radius), spec_(spec), density_(density) {
        const int n = p.n();
        d_ = n - 1;
        rate_ = p_norm(n);
        if (!(radius > 0)) throw ValidationError("measure: radius must be positive");
        if (spec.region == Region::bc_plus && spec.offset > 0) throw ValidationError("measure: offset C must be ≤ 0");
        if (spec.region == Region::annulus && !(spec.epsilon > 0 && spec.epsilon < 1))
            throw ValidationError("measure: annulus needs ε in (0,1)");

        // Orthonormal basis of the traceless space with the first vector along v0.
        Eigen::MatrixXd basis(n, d_);
        Eigen::VectorXd e0(n);
        for (int i = 0; i < n; ++i) e0(i) = n - 1 - 2.0 * i;
        std::vector<Eigen::VectorXd> found{e0.normalized()};
        for (int i = 0; i + 1 < n && static_cast<int>(found.size()) < d_; ++i) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
            v(i) = 1;
            v(i + 1) = -1;
            for (const auto& q : found) v -= q.dot(v) * q;
            if (v.norm() > 1e-8) found.push_back(v.normalized());
        }
        for (int k = 0; k < d_; ++k) basis.col(k) = found[static_cast<std::size_t>(k)];
        dir_ = basis.col(0);
        perp_ = basis.rightCols(d_ - 1);

        const double intra_min = spec.region == Region::bc_plus ? std::max(0.0, spec.offset) : 0.0;
        auto add = [&](const Eigen::VectorXd& normal, double beta) {
            constraints_.push_back({normal.dot(dir_), perp_.transpose() * normal, beta});
        };
        for (int i = 0; i + 1 < n; ++i) {
            if (!p.same_block(i, i + 1)) continue;
            Eigen::VectorXd nv = Eigen::VectorXd::Zero(n);
            nv(i) = 1;
            nv(i + 1) = -1;
            add(nv, intra_min);
        }
        if (spec.region != Region::ball) {
            const double c = spec.region == Region::bc_plus ? spec.offset : 0.0;
            for (int k = 1; k < p.num_blocks(); ++k) {
                Eigen::VectorXd nv = Eigen::VectorXd::Zero(n);
                nv.head(p.prefix_end(k)).setOnes();
                add(nv, c);
            }
        }
        for (const auto& h : constraints_)
            if (!(h.at > 0)) throw ValidationError("measure: constraint not increasing along v0");
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (p.same_block(i, j)) intra_.emplace_back(i, j);
    }

    int perp_dim() const { return d_ - 1; }
    double radius() const { return radius_; }
    double rate() const { return rate_; }

    /// Lower end of the admissible t-range on the line through w.
    double lower(const Eigen::VectorXd& w) const {
        double lo = -std::numeric_limits<double>::infinity();
        for (const auto& h : constraints_) lo = std::max(lo, (h.beta - h.aw.dot(w)) / h.at);
        return lo;
    }

    bool inside(double t, const Eigen::VectorXd& w) const {
        const double r2 = t * t + w.squaredNorm();
        if (r2 > radius_ * radius_) return false;
        if (t < lower(w)) return false;
        if (spec_.region == Region::annulus) {
            const double inner = spec_.epsilon * radius_;
            if (r2 <= inner * inner) return false;
        }
        return true;
    }

    /// Integrand without the e^{P t} factor.
    double shape(double t, const Eigen::VectorXd& w) const {
        if (density_ == Density::exponential || intra_.empty()) return 1.0;
        const Eigen::VectorXd y = t * dir_ + perp_ * w;
        double f = 1.0;
        for (auto [i, j] : intra_) f *= 0.5 * (1.0 - std::exp(-2.0 * (y(i) - y(j))));
        return f;
    }

    /// ∫ e^{P t}·shape over the admissible t-range on the line through w.
    double line_integral(const Eigen::VectorXd& w) const {
        const double w2 = w.squaredNorm();
        if (w2 >= radius_ * radius_) return 0.0;
        const double top = std::sqrt(radius_ * radius_ - w2);
        double lo = std::max(-top, lower(w));
        if (spec_.region == Region::annulus) {
            const double inner2 = spec_.epsilon * spec_.epsilon * radius_ * radius_;
            if (w2 < inner2) lo = std::max(lo, std::sqrt(inner2 - w2));
        }
        if (lo >= top) return 0.0;
        const int panels = std::max(1, static_cast<int>(std::ceil((top - lo) / kPanel)));
        const double h = (top - lo) / panels;
        double sum = 0.0;
        for (int k = 0; k < panels; ++k) {
            const double mid = lo + (k + 0.5) * h;
            double s = 0.0;
            for (std::size_t q = 0; q < kGlNodes.size(); ++q)
                for (double sign : {-1.0, 1.0}) {
                    const double t = mid + sign * 0.5 * h * kGlNodes[q];
                    s += kGlWeights[q] * std::exp(rate_ * t) * shape(t, w);
                }
            sum += 0.5 * h * s;
        }
        return sum;
    }

private:
    const Partition& p_;
    double radius_;
    RegionSpec spec_;
    Density density_;
    int d_ = 0;
    double rate_ = 0.0;
    Eigen::VectorXd dir_;
    Eigen::MatrixXd perp_;
    std::vector<HalfSpace> constraints_;
    std::vector<std::pair<int, int>> intra_;
};

std::string describe(const RegionSpec& spec, double radius) {
    std::string s = to_string(spec.region) + "(R=" + std::to_string(radius);
    if (spec.region == Region::bc_plus) s += ",C=" + std::to_string(spec.offset);
    if (spec.region == Region::annulus) s += ",eps=" + std::to_string(spec.epsilon);
    return s + ")";
}

double grid_estimate(const Problem& prob, double step, unsigned threads, std::uint64_t& lines) {
    const int m = prob.perp_dim();
    if (m == 0) {
        lines = 1;
        return prob.line_integral(Eigen::VectorXd());
    }
    const double r = prob.radius();
    const int cells = std::max(2, static_cast<int>(std::ceil(2.0 * r / step)));
    const double h = 2.0 * r / cells;
    const std::size_t per_axis = static_cast<std::size_t>(cells) + 1;
    std::size_t total = 1;
    for (int k = 0; k < m; ++k) total *= per_axis;
    lines = total;
    std::vector<double> chunk_sums(kChunks, 0.0);
    parallel_chunks(total, kChunks, threads, [&](std::size_t b, std::size_t e, std::size_t c) {
        std::vector<double> vals;
        vals.reserve(e - b);
        Eigen::VectorXd w(m);
        for (std::size_t idx = b; idx < e; ++idx) {
            std::size_t rest = idx;
            double weight = 1.0;
            for (int k = 0; k < m; ++k) {
                const std::size_t i = rest % per_axis;
                rest /= per_axis;
                w(k) = -r + static_cast<double>(i) * h;
                weight *= (i == 0 || i == per_axis - 1) ? 0.5 * h : h;
            }
            vals.push_back(weight * prob.line_integral(w));
        }
        chunk_sums[c] = pairwise_sum(vals);
    });
    return pairwise_sum(chunk_sums);
}

QuadratureResult run_grid(const Problem& prob, const Budget& budget) {
    if (!(budget.grid_step > 0)) throw ValidationError("measure: grid step must be positive");
    const unsigned threads = resolve_threads(budget.threads);
    double step = budget.grid_step;
    std::uint64_t lines = 0, coarse_lines = 0;
    double coarse = grid_estimate(prob, 2.0 * step, threads, coarse_lines);
    double fine = grid_estimate(prob, step, threads, lines);
    if (budget.grid_tolerance > 0) {
        for (int round = 0; round < 8 && std::abs(fine - coarse) > budget.grid_tolerance * std::abs(fine); ++round) {
            step *= 0.5;
            coarse = fine;
            fine = grid_estimate(prob, step, threads, lines);
        }
    }
    QuadratureResult res;
    res.estimate = fine;
    res.standard_error = prob.perp_dim() == 0 ? 0.0 : std::abs(fine - coarse);
    res.samples = lines;
    res.grid_step = step;
    res.method = Method::grid;
    return res;
}

/// Uniform point in the m-ball of radius rho.
void uniform_in_ball(std::mt19937_64& rng, double rho, Eigen::VectorXd& w) {
    const int m = static_cast<int>(w.size());
    if (m == 0) return;
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    for (int k = 0; k < m; ++k) w(k) = normal(rng);
    const double scale = rho * std::pow(unit(rng), 1.0 / m) / w.norm();
    w *= scale;
}

double unit_ball_volume(int m) {
    return std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
}

QuadratureResult run_monte_carlo(const Problem& prob, const Budget& budget) {
    if (budget.samples == 0) throw ValidationError("measure: sample count must be positive");
    const int m = prob.perp_dim();
    const double r = prob.radius(), rate = prob.rate();
    const double span = -std::expm1(-2.0 * rate * r);  // 1 - e^{-2PR}
    // Normaliser of the tilted t-density, in log form: (e^{PR} - e^{-PR})/P.
    const double log_norm = rate * r + std::log(span) - std::log(rate);
    const double ball = unit_ball_volume(m);

    std::vector<double> sums(kChunks, 0.0), squares(kChunks, 0.0);
    parallel_chunks(budget.samples, kChunks, resolve_threads(budget.threads),
                    [&](std::size_t b, std::size_t e, std::size_t c) {
                        std::seed_seq seq{budget.seed, static_cast<std::uint64_t>(c)};
                        std::mt19937_64 rng(seq);
                        std::uniform_real_distribution<double> unit;
                        std::vector<double> vals, vals2;
                        vals.reserve(e - b);
                        vals2.reserve(e - b);
                        Eigen::VectorXd w(m);
                        for (std::size_t s = b; s < e; ++s) {
                            const double u = unit(rng);
                            const double t = r + std::log(std::exp(-2.0 * rate * r) + u * span) / rate;
                            const double rho = std::sqrt(std::max(0.0, r * r - t * t));
                            uniform_in_ball(rng, rho, w);
                            double v = 0.0;
                            if (prob.inside(t, w)) v = std::exp(log_norm) * ball * std::pow(rho, m) * prob.shape(t, w);
                            vals.push_back(v);
                            vals2.push_back(v * v);
                        }
                        sums[c] = pairwise_sum(vals);
                        squares[c] = pairwise_sum(vals2);
                    });
    const double n = static_cast<double>(budget.samples);
    const double mean = pairwise_sum(sums) / n;
    const double var = std::max(0.0, pairwise_sum(squares) / n - mean * mean);
    QuadratureResult res;
    res.estimate = mean;
    res.standard_error = std::sqrt(var / n);
    res.samples = budget.samples;
    res.seed = budget.seed;
    res.method = Method::monte_carlo;
    return res;
}

QuadratureResult integrate(const Partition& p, double radius, const RegionSpec& spec, Density density, Method method,
                           const Budget& budget) {
    const Problem prob(p, radius, spec, density);
    auto res = method == Method::grid ? run_grid(prob, budget) : run_monte_carlo(prob, budget);
    res.region = describe(spec, radius);
    return res;
}

} // namespace

std::string to_string(Region r) {
    switch (r) {
    case Region::ball: return "ball";
    case Region::b_plus: return "b+";
    case Region::bc_plus: return "bc+";
    case Region::annulus: return "annulus";
    }
    return "?";
}

std::string to_string(Method m) { return m == Method::grid ? "grid" : "mc"; }

Region parse_region(const std::string& text) {
    if (text == "ball") return Region::ball;
    if (text == "b+") return Region::b_plus;
    if (text == "bc+") return Region::bc_plus;
    if (text == "annulus") return Region::annulus;
    throw ValidationError("unknown region '" + text + "' (expected ball, b+, bc+ or annulus)");
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 16) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

QuadratureResult mu_A_ball(const Partition& p, double radius, const RegionSpec& region, Method method,
                           const Budget& budget) {
    return integrate(p, radius, region, Density::haar, method, budget);
}

QuadratureResult cone_integral(const Partition& p, double offset, double radius, Method method, const Budget& budget) {
    return integrate(p, radius, RegionSpec{Region::bc_plus, offset, 0.5}, Density::exponential, method, budget);
}

QuadratureResult rejection_estimate(const Partition& p, double radius, const RegionSpec& region, Density density,
                                    std::uint64_t samples, std::uint64_t seed) {
    const Problem prob(p, radius, region, density);
    const int m = prob.perp_dim();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-radius, radius);
    const double box = std::pow(2.0 * radius, m + 1);
    std::vector<double> vals;
    vals.reserve(samples);
    double sq = 0.0;
    Eigen::VectorXd w(m);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const double t = coord(rng);
        for (int k = 0; k < m; ++k) w(k) = coord(rng);
        double v = 0.0;
        if (prob.inside(t, w)) v = box * std::exp(prob.rate() * t) * prob.shape(t, w);
        vals.push_back(v);
        sq += v * v;
    }
    const double n = static_cast<double>(samples);
    const double mean = pairwise_sum(vals) / n;
    QuadratureResult res;
    res.estimate = mean;
    res.standard_error = std::sqrt(std::max(0.0, sq / n - mean * mean) / n);
    res.samples = samples;
    res.seed = seed;
    res.method = Method::monte_carlo;
    res.region = describe(region, radius) + "[rejection]";
    return res;
}

double closed_form_asymptotic(const Partition& p, double radius) {
    const int n = p.n();
    const double pn = p_norm(n);
    return std::pow(0.5, p.intra_block_pairs()) * std::pow(2.0 * std::numbers::pi * radius / pn, (n - 2) / 2.0) *
           std::exp(pn * radius);
}

AsymReport asym_ratio_report(const Partition& p, std::span<const double> radii, Method method, const Budget& budget) {
    if (radii.empty()) throw ValidationError("asym_ratio_report: empty radius list");
    if (!std::is_sorted(radii.begin(), radii.end())) throw ValidationError("asym_ratio_report: radii must increase");
    AsymReport rep;
    for (double r : radii) {
        const auto q = mu_A_ball(p, r, RegionSpec{Region::b_plus}, method, budget);
        AsymRow row;
        row.radius = r;
        row.estimate = q.estimate;
        row.error = q.standard_error;
        row.closed_form = closed_form_asymptotic(p, r);
        row.ratio = q.estimate / row.closed_form;
        row.ratio_error = q.standard_error / row.closed_form;
        rep.rows.push_back(row);
    }
    // Least squares for log(ratio) = a + b/R.
    if (rep.rows.size() == 1) {
        rep.limit = rep.rows.front().ratio;
        return rep;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(rep.rows.size());
    for (const auto& row : rep.rows) {
        const double x = 1.0 / row.radius, y = std::log(row.ratio);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    rep.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    rep.limit = std::exp((sy - rep.slope * sx) / k);
    return rep;
}

WellRoundedMargin well_rounded_margin(const Partition& p, double radius, double delta, Method method,
                                      const Budget& budget) {
    if (!(delta > 0 && delta < radius)) throw ValidationError("well_rounded_margin: need 0 < δ < R");
    const RegionSpec ball{Region::ball};
    const double mid = mu_A_ball(p, radius, ball, method, budget).estimate;
    const double up = mu_A_ball(p, radius + delta, ball, method, budget).estimate;
    const double down = mu_A_ball(p, radius - delta, ball, method, budget).estimate;
    return {up / mid, down / mid};
}

} // namespace horocount::measure
