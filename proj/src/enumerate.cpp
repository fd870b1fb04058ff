#include "horocount/enumerate.hpp"

#include "horocount/constants.hpp"
#include "horocount/decompose.hpp"
#include "horocount/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace horocount::enumerate {

using lattice::Vec;

namespace {

constexpr double kTieTolerance = 1e-9;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Vec> columns(const IntegerMatrix& g, int begin, int end) {
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(end - begin));
    for (int c = begin; c < end; ++c) out.push_back(g.column(c));
    return out;
}

double coset_height(const IntegerMatrix& g, const Partition& p) { return decompose::height(g.to_real(), p); }

CosetRecord make_record(const IntegerMatrix& g, double h, double radius, const Partition& p) {
    return CosetRecord{g, invariant_key(g, p), h, std::abs(h - radius) <= kTieTolerance};
}

} // namespace

bool stabilizer_membership(const IntegerMatrix& delta, const Partition& p) {
    const int n = p.n();
    if (delta.n() != n) throw ValidationError("stabilizer_membership: dimension mismatch");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (p.block_of(i) > p.block_of(j) && delta(i, j) != 0) return false;
    for (int k = 0; k < p.num_blocks(); ++k) {
        const int b = p.block_begin(k), e = p.block_end(k);
        for (int i = b; i < e; ++i) {
            int row_nz = 0, col_nz = 0;
            for (int j = b; j < e; ++j) {
                const auto r = delta(i, j), c = delta(j, i);
                if (r != 0) {
                    if (r != 1 && r != -1) return false;
                    ++row_nz;
                }
                if (c != 0) ++col_nz;
            }
            if (row_nz != 1 || col_nz != 1) return false;
        }
    }
    return true;
}

bool same_coset(const IntegerMatrix& g1, const IntegerMatrix& g2, const Partition& p) {
    return stabilizer_membership(g1.inverse_unimodular() * g2, p);
}

std::string invariant_key(const IntegerMatrix& g, const Partition& p) {
    std::ostringstream os;
    for (int k = 1; k < p.num_blocks(); ++k) {
        for (const auto& row : lattice::hermite_normal_form(columns(g, 0, p.prefix_end(k)))) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << ';';
        }
        os << '|';
    }
    return os.str();
}

namespace {

std::string int128_string(__int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    std::string s;
    while (v != 0) {
        const int digit = static_cast<int>(v % 10);
        s.push_back(static_cast<char>('0' + (neg ? -digit : digit)));
        v /= 10;
    }
    if (neg) s.push_back('-');
    return {s.rbegin(), s.rend()};
}

} // namespace

std::string bucket_key(const IntegerMatrix& g, const Partition& p) {
    std::string key = invariant_key(g, p);
    for (int k = 0; k < p.num_blocks(); ++k) {
        auto basis = columns(g, 0, p.block_begin(k));
        auto form = [&](const Vec& x) {
            basis.push_back(x);
            const __int128 d = lattice::gram_determinant(basis);
            basis.pop_back();
            return d;
        };
        std::vector<__int128> diag, mixed;
        for (int c = p.block_begin(k); c < p.block_end(k); ++c) {
            const Vec x = g.column(c);
            diag.push_back(form(x));
            for (int e = c + 1; e < p.block_end(k); ++e) {
                const Vec y = g.column(e);
                Vec s(x.size());
                for (std::size_t i = 0; i < s.size(); ++i) s[i] = x[i] + y[i];
                const __int128 b = form(s) - form(x) - form(y);
                mixed.push_back(b < 0 ? -b : b);
            }
        }
        std::sort(diag.begin(), diag.end());
        std::sort(mixed.begin(), mixed.end());
        key += '#';
        for (auto d : diag) key += int128_string(d) + ',';
        key += '/';
        for (auto m : mixed) key += int128_string(m) + ',';
    }
    return key;
}

IntegerMatrix canonical_form(const IntegerMatrix& g, const Partition& p) {
    IntegerMatrix out(g.n());
    for (int k = 0; k < p.num_blocks(); ++k) {
        const auto lattice_before = lattice::hermite_normal_form(columns(g, 0, p.block_begin(k)));
        std::vector<Vec> block;
        for (int c = p.block_begin(k); c < p.block_end(k); ++c)
            block.push_back(lattice::reduce_up_to_sign(g.column(c), lattice_before));
        std::sort(block.begin(), block.end());
        for (int c = p.block_begin(k); c < p.block_end(k); ++c)
            out.set_column(c, block[static_cast<std::size_t>(c - p.block_begin(k))]);
    }
    return out;
}

std::string canonical_key(const IntegerMatrix& g, const Partition& p) { return canonical_form(g, p).to_string(); }

std::string to_string(Method m) { return m == Method::bfs ? "bfs" : "brute"; }

int default_max_depth(int n, double radius) {
    // A coset whose first column is (1, k) needs k generator steps, and k can
    // reach e^{R sqrt((N-1)/N)} inside the ball.
    const double reach = std::exp(radius * std::sqrt((n - 1.0) / n));
    return static_cast<int>(std::ceil(8.0 * radius)) + (n - 1) * static_cast<int>(std::ceil(reach));
}

int default_entry_bound(int n, double radius) {
    if (n == 2) return static_cast<int>(std::ceil(std::exp(radius + 1.0))) + 1;
    return static_cast<int>(std::ceil(std::exp(radius + 2.0)));
}

// ---------------------------------------------------------------------------
// Breadth-first search over the Cayley graph.

EnumerationReport enumerate_bfs(const Partition& p, double radius, const BfsOptions& opt) {
    if (!(radius > 0)) throw ValidationError("enumerate_bfs: radius must be positive");
    if (!(opt.margin > 0)) throw ValidationError("enumerate_bfs: margin must be positive");
    if (opt.max_depth < 0) throw ValidationError("enumerate_bfs: max_depth must be positive");
    const auto t0 = std::chrono::steady_clock::now();
    const int n = p.n();
    const int max_depth = opt.max_depth > 0 ? opt.max_depth : default_max_depth(n, radius);
    const double limit = radius + opt.margin;
    const unsigned threads = resolve_threads(opt.threads);

    struct State {
        IntegerMatrix g;
        double height;
    };
    struct Candidate {
        IntegerMatrix g;
        std::string key;
    };
    std::vector<State> states;
    std::unordered_map<std::string, std::vector<std::uint32_t>> buckets;

    const auto identity = IntegerMatrix::identity(n);
    states.push_back({identity, 0.0});
    buckets[bucket_key(identity, p)].push_back(0);
    std::vector<std::uint32_t> frontier{0};

    auto finish = [&](bool partial) {
        EnumerationReport rep{p, radius, 0, Method::bfs, {}, 0.0, partial, opt.margin, max_depth, 0, states.size()};
        for (const auto& s : states) {
            if (!(s.height <= radius + kTieTolerance)) continue;
            ++rep.count;
            if (opt.keep_cosets) rep.cosets.push_back(make_record(s.g, s.height, radius, p));
        }
        rep.seconds = seconds_since(t0);
        return rep;
    };

    for (int depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
        const std::size_t chunks = std::min<std::size_t>(frontier.size(), 256);
        std::vector<std::vector<Candidate>> expanded(chunks);
        parallel_chunks(frontier.size(), chunks, threads, [&](std::size_t b, std::size_t e, std::size_t c) {
            auto& out = expanded[c];
            for (std::size_t f = b; f < e; ++f) {
                const auto& g = states[frontier[f]].g;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        if (i == j) continue;
                        for (std::int64_t s : {1, -1}) {
                            IntegerMatrix h = g;
                            h.add_row_multiple(i, j, s);
                            auto key = bucket_key(h, p);
                            out.push_back({std::move(h), std::move(key)});
                        }
                    }
            }
        });

        std::vector<std::uint32_t> fresh;
        for (auto& chunk : expanded) {
            for (auto& cand : chunk) {
                auto& bucket = buckets[cand.key];
                const bool seen = std::any_of(bucket.begin(), bucket.end(),
                                              [&](std::uint32_t id) { return same_coset(states[id].g, cand.g, p); });
                if (seen) continue;
                const auto id = static_cast<std::uint32_t>(states.size());
                states.push_back({std::move(cand.g), std::numeric_limits<double>::quiet_NaN()});
                bucket.push_back(id);
                fresh.push_back(id);
            }
            chunk.clear();
            chunk.shrink_to_fit();
        }

        parallel_chunks(fresh.size(), std::min<std::size_t>(fresh.size(), 256), threads,
                        [&](std::size_t b, std::size_t e, std::size_t) {
                            for (std::size_t f = b; f < e; ++f) states[fresh[f]].height = coset_height(states[fresh[f]].g, p);
                        });

        if (states.size() > opt.max_states) {
            throw EnumerationOverflow("enumerate_bfs: state budget of " + std::to_string(opt.max_states) +
                                          " exceeded at depth " + std::to_string(depth + 1),
                                      finish(true));
        }
        frontier.clear();
        for (auto id : fresh)
            if (states[id].height <= limit) frontier.push_back(id);
    }
    return finish(false);
}

// ---------------------------------------------------------------------------
// Entry-bounded exhaustive scan.

namespace {

struct BruteContext {
    const Partition& p;
    double radius;
    int n;
    std::vector<std::int64_t> box;  // flat list of all vectors with |entries| ≤ bound
    std::vector<double> gram_bound;  // by number of columns m
};

using Found = std::map<std::string, CosetRecord>;

/// Lower bound for the height of every completion of the first m columns,
/// valid when m closes a block.
double partial_height_bound(const std::vector<Vec>& cols, const Partition& p, int blocks_done) {
    const int n = p.n();
    const int m = static_cast<int>(cols.size());
    Eigen::MatrixXd c(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) c(i, j) = static_cast<double>(cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
    const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
    double sum_sq = 0.0, prefix = 0.0;
    for (int k = 0; k < blocks_done; ++k) {
        const int b = p.block_begin(k), s = p.block_size(k);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(r.block(b, b, s, s));
        const Eigen::VectorXd logs = svd.singularValues().array().log();
        const double bk = logs.mean();
        sum_sq += (logs.array() - bk).square().sum() + s * bk * bk;
        prefix += s * bk;
    }
    sum_sq += prefix * prefix / (n - m);
    return std::sqrt(sum_sq);
}

/// Cofactor vector: det[C | x] = Σ x_i cof_i for the n×(n-1) column set C.
Vec cofactors(const std::vector<Vec>& cols, int n) {
    Vec cof(static_cast<std::size_t>(n));
    IntegerMatrix minor(n - 1);
    for (int i = 0; i < n; ++i) {
        for (int r = 0, mr = 0; r < n; ++r) {
            if (r == i) continue;
            for (int c = 0; c < n - 1; ++c) minor(mr, c) = cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
            ++mr;
        }
        cof[static_cast<std::size_t>(i)] = ((i + n - 1) % 2 == 0 ? 1 : -1) * minor.determinant();
    }
    return cof;
}

void record_matrix(const BruteContext& ctx, const std::vector<Vec>& cols, Found& found) {
    IntegerMatrix g(ctx.n);
    for (int c = 0; c < ctx.n; ++c) g.set_column(c, cols[static_cast<std::size_t>(c)]);
    auto key = canonical_key(g, ctx.p);
    if (found.count(key)) return;
    const double h = coset_height(g, ctx.p);
    if (h > ctx.radius + kTieTolerance) return;
    found.emplace(std::move(key), make_record(g, h, ctx.radius, ctx.p));
}

void complete_last(const BruteContext& ctx, std::vector<Vec>& cols, Found& found) {
    const int n = ctx.n;
    const Vec cof = cofactors(cols, n);
    if (ctx.p.block_size(ctx.p.num_blocks() - 1) == 1) {
        // det = 1 fixes the last column modulo the lattice of the others.
        std::int64_t g = 0;
        Vec x = lattice::bezout(cof, g);
        if (g != 1) return;
        cols.push_back(std::move(x));
        record_matrix(ctx, cols, found);
        cols.pop_back();
        return;
    }
    const std::size_t count = ctx.box.size() / static_cast<std::size_t>(n);
    for (std::size_t v = 0; v < count; ++v) {
        const std::int64_t* x = &ctx.box[v * static_cast<std::size_t>(n)];
        __int128 det = 0;
        for (int i = 0; i < n; ++i) det += static_cast<__int128>(x[i]) * cof[static_cast<std::size_t>(i)];
        if (det != 1) continue;
        cols.emplace_back(x, x + n);
        record_matrix(ctx, cols, found);
        cols.pop_back();
    }
}

/// Column classes admissible at position j = cols.size(), in increasing order.
std::vector<Vec> column_candidates(const BruteContext& ctx, const std::vector<Vec>& cols) {
    const int n = ctx.n;
    const int j = static_cast<int>(cols.size());
    const int m = j + 1;
    const int k = ctx.p.block_of(j);
    const auto lattice_before = lattice::hermite_normal_form(
        std::vector<Vec>(cols.begin(), cols.begin() + ctx.p.block_begin(k)));
    const bool ordered = j > ctx.p.block_begin(k);

    // Orthonormal basis of span(cols) and the exact prefix Gram determinant.
    std::vector<std::vector<double>> basis;
    for (const auto& c : cols) {
        std::vector<double> v(c.begin(), c.end());
        for (const auto& q : basis) {
            double d = 0;
            for (int i = 0; i < n; ++i) d += q[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= d * q[static_cast<std::size_t>(i)];
        }
        double nv = 0;
        for (double x : v) nv += x * x;
        nv = std::sqrt(nv);
        for (double& x : v) x /= nv;
        basis.push_back(std::move(v));
    }
    const double prefix_gram = static_cast<double>(lattice::gram_determinant(cols));
    const double bound = ctx.gram_bound[static_cast<std::size_t>(m)];
    const double perp_bound = bound / prefix_gram * (1.0 + 1e-6);

    std::set<Vec> seen, accepted;
    const std::size_t count = ctx.box.size() / static_cast<std::size_t>(n);
    std::vector<Vec> trial = cols;
    trial.emplace_back();
    for (std::size_t idx = 0; idx < count; ++idx) {
        const std::int64_t* x = &ctx.box[idx * static_cast<std::size_t>(n)];
        double perp = 0;
        for (int i = 0; i < n; ++i) perp += static_cast<double>(x[i]) * static_cast<double>(x[i]);
        for (const auto& q : basis) {
            double d = 0;
            for (int i = 0; i < n; ++i) d += q[static_cast<std::size_t>(i)] * static_cast<double>(x[i]);
            perp -= d * d;
        }
        if (perp > perp_bound || perp < 0.5 / prefix_gram) continue;  // too long, or dependent
        Vec cls = lattice::reduce_up_to_sign(Vec(x, x + n), lattice_before);
        if (ordered && !(cols.back() < cls)) continue;
        if (!seen.insert(cls).second) continue;
        trial.back() = cls;
        if (static_cast<double>(lattice::gram_determinant(trial)) > bound * (1.0 + 1e-12)) continue;
        if (lattice::minor_gcd(trial) != 1) continue;
        // Block boundary: everything about the completed blocks is now fixed.
        if (ctx.p.prefix_end(k + 1) == m && m < n &&
            partial_height_bound(trial, ctx.p, k + 1) > ctx.radius + kTieTolerance)
            continue;
        accepted.insert(std::move(cls));
    }
    return {accepted.begin(), accepted.end()};
}

void extend(const BruteContext& ctx, std::vector<Vec>& cols, Found& found) {
    if (static_cast<int>(cols.size()) == ctx.n - 1) {
        complete_last(ctx, cols, found);
        return;
    }
    for (auto& c : column_candidates(ctx, cols)) {
        cols.push_back(std::move(c));
        extend(ctx, cols, found);
        cols.pop_back();
    }
}

EnumerationReport brute_once(const Partition& p, double radius, int bound, const BruteOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = p.n();
    const double side = 2.0 * bound + 1.0;
    if (std::pow(side, n) > 5e7) throw ResourceError("enumerate_brute: entry box too large for an exhaustive scan");

    BruteContext ctx{p, radius, n, {}, {}};
    std::vector<std::int64_t> v(static_cast<std::size_t>(n), -bound);
    while (true) {
        bool zero = std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
        if (!zero) ctx.box.insert(ctx.box.end(), v.begin(), v.end());
        int i = n - 1;
        while (i >= 0 && v[static_cast<std::size_t>(i)] == bound) v[static_cast<std::size_t>(i--)] = -bound;
        if (i < 0) break;
        ++v[static_cast<std::size_t>(i)];
    }
    // The Iwasawa log-diagonal has norm at most the height, so the covolume of
    // the first m columns is at most e^{R sqrt(m(N-m)/N)}.
    ctx.gram_bound.resize(static_cast<std::size_t>(n + 1));
    for (int m = 0; m <= n; ++m) ctx.gram_bound[static_cast<std::size_t>(m)] = std::exp(2.0 * radius * std::sqrt(m * (n - m) / static_cast<double>(n)));

    std::vector<Vec> empty;
    const auto first = column_candidates(ctx, empty);
    const std::size_t chunks = std::min<std::size_t>(first.size(), 64);
    std::vector<Found> partial(chunks);
    parallel_chunks(first.size(), chunks, resolve_threads(opt.threads), [&](std::size_t b, std::size_t e, std::size_t c) {
        std::vector<Vec> cols;
        for (std::size_t i = b; i < e; ++i) {
            cols.assign(1, first[i]);
            extend(ctx, cols, partial[c]);
        }
    });
    Found all;
    for (auto& f : partial) all.merge(f);

    EnumerationReport rep{p, radius, all.size(), Method::brute, {}, 0.0, false, 0.0, 0, bound, all.size()};
    if (opt.keep_cosets)
        for (auto& [key, rec] : all) rep.cosets.push_back(std::move(rec));
    rep.seconds = seconds_since(t0);
    return rep;
}

} // namespace

EnumerationReport enumerate_brute(const Partition& p, double radius, const BruteOptions& opt) {
    if (radius < 0) throw ValidationError("enumerate_brute: radius must be nonnegative");
    if (opt.entry_bound < 0) throw ValidationError("enumerate_brute: entry_bound must be positive");
    int bound = opt.entry_bound > 0 ? opt.entry_bound : default_entry_bound(p.n(), radius);
    auto rep = brute_once(p, radius, bound, opt);
    if (!opt.stabilize) return rep;
    for (int round = 0; round < 4; ++round) {
        auto next = brute_once(p, radius, 2 * bound, opt);
        next.seconds += rep.seconds;
        const bool stable = next.count == rep.count;
        rep = std::move(next);
        bound *= 2;
        if (stable) break;
    }
    return rep;
}

std::vector<std::string> coset_keys(const EnumerationReport& report, double radius) {
    std::vector<std::string> keys;
    for (const auto& c : report.cosets)
        if (c.height <= radius + kTieTolerance) keys.push_back(canonical_key(c.representative, report.partition));
    std::sort(keys.begin(), keys.end());
    return keys;
}

void check_brute_covers(const EnumerationReport& bfs, const EnumerationReport& brute) {
    const double r = std::min(bfs.radius, brute.radius);
    const auto a = coset_keys(bfs, r);
    const auto b = coset_keys(brute, r);
    std::vector<std::string> missing;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(missing));
    if (!missing.empty())
        throw InconsistencyError("enumerate_brute missed " + std::to_string(missing.size()) +
                                 " coset(s) found by the BFS (first: " + missing.front() +
                                 "); increase the entry bound");
}

RatioTable empirical_ratio(const Partition& p, std::span<const double> radii, const BfsOptions& opt) {
    if (radii.empty()) throw ValidationError("empirical_ratio: empty radius list");
    const double r_max = *std::max_element(radii.begin(), radii.end());
    if (!(r_max > 0)) throw ValidationError("empirical_ratio: need a positive radius");
    BfsOptions o = opt;
    o.keep_cosets = true;
    RatioTable table{{}, enumerate_bfs(p, r_max, o)};
    const auto cc = constants::counting_constant(p);
    for (double r : radii) {
        RatioRow row;
        row.radius = r;
        row.count = static_cast<std::size_t>(std::count_if(table.report.cosets.begin(), table.report.cosets.end(),
                                                           [&](const CosetRecord& c) { return c.height <= r + kTieTolerance; }));
        row.asymptotic = constants::asymptotic_count(cc, r);
        if (row.asymptotic > 0) row.ratio = static_cast<double>(row.count) / row.asymptotic;
        table.rows.push_back(row);
    }
    return table;
}

} // namespace horocount::enumerate
