#include "horocount/acceptance.hpp"

#include "horocount/cartan.hpp"
#include "horocount/constants.hpp"
#include "horocount/decompose.hpp"
#include "horocount/dynamics.hpp"
#include "horocount/enumerate.hpp"
#include "horocount/measure.hpp"
#include "horocount/special.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace horocount::acceptance {

namespace {

using decompose::Matrix;

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Checker {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "FAILED " << what << "; ";
        }
    }
    void note(const std::string& s) { detail << s << "; "; }
};

template <class Body>
CriterionResult timed(const std::string& name, double budget_seconds, Body&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    body(c);
    CriterionResult r;
    r.name = name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(r.seconds < budget_seconds, "runtime " + fmt(r.seconds) + " s < " + fmt(budget_seconds) + " s");
    r.passed = c.ok;
    r.detail = c.detail.str();
    return r;
}

Matrix random_special_orthogonal(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    Matrix q = Eigen::HouseholderQR<Matrix>(a).householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
}

Matrix random_sl(int n, std::mt19937_64& rng, double spread) {
    std::normal_distribution<double> normal;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = spread * normal(rng);
    double d = a.determinant();
    if (d < 0) {
        a.row(0) *= -1.0;
        d = -d;
    }
    return a / std::pow(d, 1.0 / n);
}

Partition random_partition(int n, std::mt19937_64& rng) {
    while (true) {
        std::vector<int> sizes;
        int left = n;
        while (left > 0) {
            const int s = std::uniform_int_distribution<int>(1, left)(rng);
            sizes.push_back(s);
            left -= s;
        }
        if (sizes.size() >= 2) return Partition(n, sizes);
    }
}

/// Random element of the identity component of the horocycle stabiliser:
/// block special orthogonal times block unipotent.
Matrix random_stabilizer(const Partition& p, std::mt19937_64& rng) {
    const int n = p.n();
    Matrix c = Matrix::Zero(n, n);
    for (int k = 0; k < p.num_blocks(); ++k)
        c.block(p.block_begin(k), p.block_begin(k), p.block_size(k), p.block_size(k)) =
            random_special_orthogonal(p.block_size(k), rng);
    Matrix u = Matrix::Identity(n, n);
    std::normal_distribution<double> normal;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (p.block_of(i) < p.block_of(j)) u(i, j) = 2.0 * normal(rng);
    return c * u;
}

// --- criteria ----------------------------------------------------------------

CriterionResult example_constant(const std::string& name, std::vector<int> blocks, Scale) {
    return timed(name, 1.0, [&](Checker& c) {
        const Partition p(3, blocks);
        const auto cc = constants::counting_constant(p);
        const double hand = constants::worked_example_coefficient(p);
        c.require(cc.poly_numerator == 1, "p = 1/2");
        c.require(std::abs(cc.exp_rate * cc.exp_rate - 8.0) <= 1e-12, "q^2 = 8");
        c.require(rel(cc.coefficient, hand) <= 1e-12, "general vs closed-form coefficient to 1e-12");
        c.note("c = " + fmt(cc.coefficient) + ", closed form " + fmt(hand) + ", rel diff " +
               fmt(rel(cc.coefficient, hand)));
    });
}

CriterionResult p_norm_identity(Scale) {
    return timed("P_N identity", 1.0, [&](Checker& c) {
        int bad = 0;
        for (int n = 1; n <= 50; ++n)
            if (p_norm_squared_sum(n) != p_norm_squared_closed(n)) ++bad;
        c.require(bad == 0, "exact equality for N = 1..50");
        c.note("checked N = 1..50, mismatches " + std::to_string(bad));
    });
}

CriterionResult volume_identities(Scale) {
    return timed("Vol(SO_n) and xi identity", 5.0, [&](Checker& c) {
        double worst_so = 0.0, worst_xi = 0.0;
        for (int n = 1; n <= 12; ++n)
            worst_so = std::max(worst_so, rel(constants::vol_so_recursive(n), constants::vol_so(n)));
        for (int n = 2; n <= 8; ++n) worst_xi = std::max(worst_xi, constants::xi_identity_check(n));
        c.require(worst_so <= 1e-12, "recursion vs closed product to 1e-12 for n = 1..12");
        c.require(worst_xi <= 1e-9, "xi identity to 1e-9 for N = 2..8");
        c.note("max rel diff Vol(SO_n) " + fmt(worst_so) + ", max xi identity error " + fmt(worst_xi));
    });
}

CriterionResult decomposition_suite(Scale scale) {
    return timed("Decomposition suite", 30.0, [&](Checker& c) {
        std::mt19937_64 rng(7);
        const int trials = scale == Scale::full ? 10000 : 1000;
        double worst_rec = 0.0, worst_right = 0.0, worst_left = 0.0;
        for (int t = 0; t < trials; ++t) {
            const int n = 2 + t % 5;
            const Partition p = random_partition(n, rng);
            const Matrix g = random_sl(n, rng, 1.0 + (t % 3));
            const auto frame = decompose::horocycle_frame(g, p);
            worst_rec = std::max(worst_rec, (frame.reconstruct() - g).norm() / g.norm());
            if (t % 10 == 0) {
                const double h = frame.height;
                worst_right = std::max(worst_right, std::abs(decompose::height(g * random_stabilizer(p, rng), p) - h));
                worst_left = std::max(worst_left, std::abs(decompose::height(random_special_orthogonal(n, rng) * g, p) - h));
            }
        }
        Matrix hand(2, 2);
        hand << 1, 0, 1, 1;
        const Partition p2(2, {1, 1});
        const double h = decompose::height(hand, p2);
        const double oracle = geodesic_height_n2(1, 0, 1, 1);
        c.require(worst_rec <= 1e-9, "reconstruction within 1e-9 relative Frobenius");
        c.require(worst_right <= 1e-9, "right invariance under the stabiliser within 1e-9");
        c.require(worst_left <= 1e-9, "left K-invariance within 1e-9");
        c.require(std::abs(h - oracle) <= 1e-9, "hand case against the geodesic oracle");
        c.require(std::abs(h - std::log(2.0) / std::sqrt(2.0)) <= 1e-9, "hand case equals log(2)/sqrt(2)");
        c.note(std::to_string(trials) + " reconstructions, worst " + fmt(worst_rec) + "; invariance worst " +
               fmt(std::max(worst_right, worst_left)) + "; height([[1,0],[1,1]]) = " + fmt(h) + ", oracle " +
               fmt(oracle));
    });
}

CriterionResult enumeration_equivalence(Scale scale, unsigned threads) {
    return timed("Enumeration oracle equivalence", 600.0, [&](Checker& c) {
        struct Case {
            std::vector<int> blocks;
            double radius;
        };
        const bool full = scale == Scale::full;
        const std::vector<Case> cases{{{1, 1}, full ? 5.0 : 3.0}, {{1, 1, 1}, full ? 2.0 : 1.5}, {{2, 1}, full ? 2.0 : 1.5}};
        for (const auto& cs : cases) {
            const int n = std::accumulate(cs.blocks.begin(), cs.blocks.end(), 0);
            const Partition p(n, cs.blocks);
            enumerate::BfsOptions bo;
            bo.threads = threads;
            enumerate::BruteOptions br;
            br.threads = threads;
            const auto bfs = enumerate::enumerate_bfs(p, cs.radius, bo);
            const auto brute = enumerate::enumerate_brute(p, cs.radius, br);
            std::ostringstream label;
            label << "N=" << n << " " << p.to_json() << " R=" << cs.radius;
            bool all_equal = true;
            for (double r = 0.5; r <= cs.radius + 1e-12; r += 0.5)
                if (enumerate::coset_keys(bfs, r) != enumerate::coset_keys(brute, r)) all_equal = false;
            c.require(all_equal, "identical coset sets for " + label.str());
            c.note(label.str() + ": bfs " + std::to_string(bfs.count) + ", brute " + std::to_string(brute.count));
        }
    });
}

CriterionResult empirical_ratio(Scale scale, unsigned threads) {
    return timed("Empirical ratio N=2", 600.0, [&](Checker& c) {
        const Partition p(2, {1, 1});
        const std::vector<double> radii = scale == Scale::full ? std::vector<double>{4, 6, 8} : std::vector<double>{3, 4, 5};
        enumerate::BfsOptions bo;
        bo.threads = threads;
        const auto table = enumerate::empirical_ratio(p, radii, bo);
        std::vector<double> r;
        for (const auto& row : table.rows) {
            r.push_back(row.ratio.value_or(std::nan("")));
            c.note("R=" + fmt(row.radius) + " count=" + std::to_string(row.count) + " ratio=" + fmt(r.back()));
        }
        const double d1 = std::abs(r[1] - r[0]), d2 = std::abs(r[2] - r[1]);
        c.require(d2 < d1, "successive differences decrease");
        const double limit = r.back();
        c.note("limit estimate " + fmt(limit));
        if (std::abs(limit - 1.0) > 0.2)
            c.note("FLAG: limit differs from 1 by more than 20%");
        else
            c.note("limit within 20% of 1");
    });
}

CriterionResult volume_quadrature(Scale scale, unsigned threads) {
    return timed("Volume quadrature", 300.0, [&](Checker& c) {
        const bool full = scale == Scale::full;
        measure::Budget budget;
        budget.threads = threads;
        budget.samples = full ? 10'000'000 : 1'000'000;
        budget.grid_step = full ? 0.01 : 0.04;

        const Partition p2(2, {1, 1});
        const double analytic = std::sqrt(2.0) / 2.0 * std::expm1(std::sqrt(2.0) * 5.0);
        for (auto method : {measure::Method::grid, measure::Method::monte_carlo}) {
            const auto q = measure::mu_A_ball(p2, 5.0, {measure::Region::b_plus}, method, budget);
            c.require(rel(q.estimate, analytic) <= 1e-3, "N=2 analytic value to 0.1% by " + measure::to_string(method));
            c.note("N=2 R=5 " + measure::to_string(method) + " rel err " + fmt(rel(q.estimate, analytic)));
        }
        for (const auto& blocks : {std::vector<int>{2, 1}, std::vector<int>{1, 1, 1}}) {
            const Partition p(3, blocks);
            const auto g = measure::mu_A_ball(p, 6.0, {measure::Region::b_plus}, measure::Method::grid, budget);
            const auto m = measure::mu_A_ball(p, 6.0, {measure::Region::b_plus}, measure::Method::monte_carlo, budget);
            const double combined = std::hypot(g.standard_error, m.standard_error);
            const double z = std::abs(g.estimate - m.estimate) / combined;
            c.require(z <= 3.0, "N=3 " + p.to_json() + " MC vs grid within 3 combined errors");
            c.note("N=3 " + p.to_json() + " R=6 grid " + fmt(g.estimate) + " mc " + fmt(m.estimate) + " z=" + fmt(z));
        }
        for (const auto& [n, blocks] : {std::pair{2, std::vector<int>{1, 1}}, std::pair{3, std::vector<int>{2, 1}},
                                        std::pair{3, std::vector<int>{1, 1, 1}}}) {
            const Partition p(n, blocks);
            const auto bc = measure::mu_A_ball(p, 8.0, {measure::Region::bc_plus, -2.0}, measure::Method::grid, budget);
            const auto bp = measure::mu_A_ball(p, 8.0, {measure::Region::b_plus}, measure::Method::grid, budget);
            const double ratio = bp.estimate / bc.estimate;
            c.require(ratio >= 0.95, "B+/B^{C,+} >= 0.95 at R=8, C=-2 for " + p.to_json());
            c.note(p.to_json() + " B+/B^{C,+} = " + fmt(ratio));
        }
    });
}

/// Coarse blocks read off from concrete sequences: a prefix is a cut exactly
/// when its covolume stays constant along the sequence.
std::vector<std::vector<int>> coarse_from_instances(const dynamics::CleanSequenceSpec& spec) {
    const Partition& p = spec.partition;
    const auto i1 = dynamics::instantiate(spec, 1.0), i2 = dynamics::instantiate(spec, 2.0);
    auto gram = [&](const dynamics::Instance& in, int prefix_blocks) {
        Matrix g = Matrix::Zero(p.n(), p.n());
        for (int i = 0; i < p.n(); ++i) g(i, i) = in.a[static_cast<std::size_t>(i)] * in.b[static_cast<std::size_t>(i)];
        std::vector<lattice::Vec> basis;
        for (int i = 0; i < p.prefix_end(prefix_blocks); ++i) {
            lattice::Vec e(static_cast<std::size_t>(p.n()), 0);
            e[static_cast<std::size_t>(i)] = 1;
            basis.push_back(e);
        }
        return dynamics::covolume_gram(g, basis);
    };
    std::vector<std::vector<int>> out(1);
    for (int k = 0; k < p.num_blocks(); ++k) {
        out.back().push_back(k);
        const bool cut = std::abs(std::log(gram(i2, k + 1)) - std::log(gram(i1, k + 1))) < 1e-9;
        if (cut && k + 1 < p.num_blocks()) out.emplace_back();
    }
    return out;
}

CriterionResult classifier(Scale) {
    return timed("Classifier", 10.0, [&](Checker& c) {
        using namespace dynamics;
        const Partition p2(2, {1, 1});
        {
            const CleanSequenceSpec id{Partition(3, {2, 1}), {ABehavior::identity, ABehavior::identity},
                                       {BBehavior::constant_one, BBehavior::constant_one}};
            const auto r = classify_limit(id);
            bool all_k = r.nondivergent && r.coarse_sizes() == std::vector<int>{2, 1};
            for (const auto& b : r.blocks) all_k = all_k && b.role == Role::K;
            c.require(all_k, "identity sequence: nondivergent, same partition, all roles K");
        }
        {
            const auto r = classify_limit({p2, {ABehavior::identity, ABehavior::identity},
                                           {BBehavior::to_infinity, BBehavior::constant_one}});
            c.require(r.nondivergent && r.coarse_sizes() == std::vector<int>{2} && r.blocks[0].role == Role::M,
                      "N=2 b -> infinity: one merged block with role M");
        }
        {
            const auto r = classify_limit({p2, {ABehavior::identity, ABehavior::identity},
                                           {BBehavior::to_zero, BBehavior::constant_one}});
            c.require(!r.nondivergent, "N=2 b -> 0: divergent");
        }

        const auto specs = enumerate_clean_specs(4);
        int identity_failures = 0, divergence_failures = 0, nondivergent = 0;
        for (const auto& spec : specs) {
            const auto r = classify_limit(spec);
            // Nondivergence against the covolumes of a concrete sequence.
            double min_covol = 1e300;
            for (int t = 1; t <= 20; ++t) {
                const auto in = instantiate(spec, t);
                for (int k = 1; k < spec.partition.num_blocks(); ++k)
                    min_covol = std::min(min_covol, covolume(spec.partition, in.a, in.b, k));
            }
            if (r.nondivergent != (min_covol > 0.5)) ++divergence_failures;
            if (!r.nondivergent) continue;
            ++nondivergent;
            // 𝔍1 = 𝔍1(new) ⊔ 𝔍1(old,∞) ⊔ 𝔍1(0), with roles K exactly on 𝔍1(0).
            const auto expected = coarse_from_instances(spec);
            bool ok = expected.size() == r.blocks.size();
            for (std::size_t i = 0; ok && i < expected.size(); ++i) {
                const auto& blk = r.blocks[i];
                ok = blk.members == expected[i];
                const bool is_new = expected[i].size() > 1;
                const bool unbounded = !is_new && spec.a[static_cast<std::size_t>(expected[i][0])] == ABehavior::unbounded;
                const int memberships = int(is_new && blk.origin == Origin::merged) +
                                        int(!is_new && unbounded && blk.origin == Origin::old_unbounded) +
                                        int(!is_new && !unbounded && blk.origin == Origin::old_identity);
                ok = ok && memberships == 1 && ((blk.role == Role::K) == (blk.origin == Origin::old_identity));
            }
            if (!ok) ++identity_failures;
        }
        c.require(identity_failures == 0, "set identity on every clean spec for N <= 4");
        c.require(divergence_failures == 0, "nondivergence flag matches concrete covolumes");
        c.note(std::to_string(specs.size()) + " clean specs (" + std::to_string(nondivergent) + " nondivergent)");

        std::mt19937_64 rng(11);
        std::normal_distribution<double> normal;
        double worst = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const int n = 2 + t % 4;
            const Partition p = random_partition(n, rng);
            std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
            double bsum = 0.0;
            std::vector<double> blog(static_cast<std::size_t>(p.num_blocks()));
            for (auto& x : blog) x = normal(rng);
            for (int k = 0; k < p.num_blocks(); ++k) bsum += p.block_size(k) * blog[static_cast<std::size_t>(k)];
            for (int k = 0; k < p.num_blocks(); ++k) {
                double asum = 0.0;
                for (int i = p.block_begin(k); i < p.block_end(k); ++i) asum += (a[static_cast<std::size_t>(i)] = normal(rng));
                for (int i = p.block_begin(k); i < p.block_end(k); ++i) {
                    a[static_cast<std::size_t>(i)] = std::exp(a[static_cast<std::size_t>(i)] - asum / p.block_size(k));
                    b[static_cast<std::size_t>(i)] = std::exp(blog[static_cast<std::size_t>(k)] - bsum / n);
                }
            }
            // Gram side: a rotated inside each block, so the basis images are not orthogonal.
            Matrix g = Matrix::Zero(n, n);
            for (int k = 0; k < p.num_blocks(); ++k) {
                const int s = p.block_size(k), o = p.block_begin(k);
                Matrix d = Matrix::Zero(s, s);
                for (int i = 0; i < s; ++i) d(i, i) = a[static_cast<std::size_t>(o + i)] * b[static_cast<std::size_t>(o + i)];
                g.block(o, o, s, s) = random_special_orthogonal(s, rng) * d * random_special_orthogonal(s, rng);
            }
            const int prefix = 1 + t % (p.num_blocks() - 1);
            std::vector<lattice::Vec> basis;
            for (int i = 0; i < p.prefix_end(prefix); ++i) {
                lattice::Vec e(static_cast<std::size_t>(n), 0);
                e[static_cast<std::size_t>(i)] = 1;
                basis.push_back(e);
            }
            worst = std::max(worst, rel(covolume(p, a, b, prefix), covolume_gram(g, basis)));
        }
        c.require(worst <= 1e-12, "covolume closed form vs Gram to 1e-12 on 1000 inputs");
        c.note("covolume worst rel diff " + fmt(worst));
    });
}

} // namespace

double geodesic_height_n2(double g00, double g01, double g10, double g11) {
    auto f = [&](double x) {
        Eigen::Matrix2d m;
        m << g00, g00 * x + g01, g10, g10 * x + g11;
        const double s = Eigen::JacobiSVD<Eigen::Matrix2d>(m).singularValues()(0);
        return std::sqrt(2.0) * std::log(s);
    };
    // Coarse scan for a bracket, then golden-section search.
    double best = 0.0, best_val = f(0.0);
    for (double x = -100.0; x <= 100.0; x += 0.01) {
        const double v = f(x);
        if (v < best_val) {
            best_val = v;
            best = x;
        }
    }
    double a = best - 0.01, b = best + 0.01;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return f(0.5 * (a + b));
}

std::vector<Criterion> criteria() {
    return {
        {"Counting constant [1,1,1]", [](Scale s, unsigned) { return example_constant("Counting constant [1,1,1]", {1, 1, 1}, s); }},
        {"Counting constant [2,1]", [](Scale s, unsigned) { return example_constant("Counting constant [2,1]", {2, 1}, s); }},
        {"P_N identity", [](Scale s, unsigned) { return p_norm_identity(s); }},
        {"Vol(SO_n) and xi identity", [](Scale s, unsigned) { return volume_identities(s); }},
        {"Decomposition suite", [](Scale s, unsigned) { return decomposition_suite(s); }},
        {"Enumeration oracle equivalence", [](Scale s, unsigned t) { return enumeration_equivalence(s, t); }},
        {"Empirical ratio N=2", [](Scale s, unsigned t) { return empirical_ratio(s, t); }},
        {"Volume quadrature", [](Scale s, unsigned t) { return volume_quadrature(s, t); }},
        {"Classifier", [](Scale s, unsigned) { return classifier(s); }},
    };
}

std::vector<CriterionResult> run_all(Scale scale, unsigned threads, std::ostream& out) {
    std::vector<CriterionResult> results;
    for (const auto& c : criteria()) {
        CriterionResult r;
        try {
            r = c.run(scale, threads);
        } catch (const std::exception& e) {
            r.name = c.name;
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " (" << std::fixed << std::setprecision(2) << r.seconds
            << " s): " << r.detail << std::defaultfloat << '\n'
            << std::flush;
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace horocount::acceptance
