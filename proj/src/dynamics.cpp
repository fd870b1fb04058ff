#include "horocount/dynamics.hpp"

#include "horocount/cartan.hpp"
#include "horocount/errors.hpp"

#include <json.hpp>

#include <cmath>

namespace horocount::dynamics {

std::string to_string(ABehavior a) { return a == ABehavior::unbounded ? "unbounded" : "identity"; }

std::string to_string(BBehavior b) {
    switch (b) {
    case BBehavior::to_infinity: return "infinity";
    case BBehavior::constant_one: return "one";
    case BBehavior::to_zero: return "zero";
    }
    return "?";
}

ABehavior parse_a_behavior(const std::string& text) {
    if (text == "unbounded" || text == "inf" || text == "infinity") return ABehavior::unbounded;
    if (text == "identity" || text == "id" || text == "one") return ABehavior::identity;
    throw ValidationError("unknown a-behavior '" + text + "' (expected unbounded or identity)");
}

BBehavior parse_b_behavior(const std::string& text) {
    if (text == "infinity" || text == "inf" || text == "to_infinity") return BBehavior::to_infinity;
    if (text == "one" || text == "1" || text == "constant_one") return BBehavior::constant_one;
    if (text == "zero" || text == "0" || text == "to_zero") return BBehavior::to_zero;
    throw ValidationError("unknown b-behavior '" + text + "' (expected infinity, one or zero)");
}

std::string to_string(Role r) { return r == Role::K ? "K" : "M"; }

std::string to_string(Origin o) {
    switch (o) {
    case Origin::merged: return "new";
    case Origin::old_unbounded: return "old_unbounded";
    case Origin::old_identity: return "old_identity";
    }
    return "?";
}

void CleanSequenceSpec::validate() const {
    const auto k0 = static_cast<std::size_t>(partition.num_blocks());
    if (a.size() != k0) throw ValidationError("spec: need one a-behavior per block");
    if (b.size() != k0) throw ValidationError("spec: need one b-behavior per prefix");
    if (b.back() != BBehavior::constant_one)
        throw ValidationError("spec: the full prefix has determinant one, its behavior must be 'one'");
    for (std::size_t k = 0; k < k0; ++k)
        if (a[k] == ABehavior::unbounded && partition.block_size(static_cast<int>(k)) == 1)
            throw ValidationError("spec: block " + std::to_string(k) +
                                  " has size one and no M-part; the sequence is not clean "
                                  "(pass to a subsequence first)");
}

std::vector<int> LimitClassification::coarse_sizes() const {
    std::vector<int> out;
    for (const auto& blk : blocks) out.push_back(blk.end - blk.begin);
    return out;
}

std::string LimitClassification::to_json() const {
    nlohmann::json j;
    j["nondivergent"] = nondivergent;
    if (nondivergent) {
        j["coarse_partition"] = coarse_sizes();
        auto arr = nlohmann::json::array();
        for (const auto& blk : blocks) {
            std::vector<int> idx;
            for (int i = blk.begin; i < blk.end; ++i) idx.push_back(i);
            arr.push_back({{"indices", idx}, {"members", blk.members}, {"origin", to_string(blk.origin)},
                           {"role", to_string(blk.role)}});
        }
        j["blocks"] = arr;
    }
    return j.dump();
}

LimitClassification classify_limit(const CleanSequenceSpec& spec) {
    spec.validate();
    LimitClassification out;
    out.nondivergent = std::none_of(spec.b.begin(), spec.b.end(), [](BBehavior b) { return b == BBehavior::to_zero; });
    if (!out.nondivergent) return out;
    // A prefix whose character stays bounded away from 0 and ∞ is a cut; a
    // prefix whose character escapes merges its two neighbouring blocks.
    const Partition& p = spec.partition;
    CoarseBlock cur;
    cur.begin = 0;
    for (int k = 0; k < p.num_blocks(); ++k) {
        cur.members.push_back(k);
        if (spec.b[static_cast<std::size_t>(k)] != BBehavior::constant_one) continue;
        cur.end = p.block_end(k);
        if (cur.members.size() > 1) {
            cur.origin = Origin::merged;
        } else {
            cur.origin = spec.a[static_cast<std::size_t>(k)] == ABehavior::unbounded ? Origin::old_unbounded
                                                                                      : Origin::old_identity;
        }
        cur.role = cur.origin == Origin::old_identity ? Role::K : Role::M;
        out.blocks.push_back(cur);
        cur = CoarseBlock{};
        cur.begin = p.block_end(k);
    }
    return out;
}

std::vector<std::vector<int>> stable_subspaces(const Partition& p) {
    std::vector<std::vector<int>> out;
    for (int k = 1; k < p.num_blocks(); ++k) {
        std::vector<int> idx;
        for (int i = 0; i < p.prefix_end(k); ++i) idx.push_back(i);
        out.push_back(std::move(idx));
    }
    return out;
}

double covolume(const Partition& p, std::span<const double> a, std::span<const double> b, int prefix_blocks) {
    const auto n = static_cast<std::size_t>(p.n());
    if (a.size() != n || b.size() != n) throw ValidationError("covolume: dimension mismatch");
    if (prefix_blocks < 0 || prefix_blocks > p.num_blocks()) throw ValidationError("covolume: bad prefix");
    for (int k = 0; k < p.num_blocks(); ++k) {
        const auto idx = p.block_indices(k);
        if (std::abs(std::log(lambda(a, idx))) > 1e-9) throw ValidationError("covolume: a must have block determinant one");
        for (int i : idx)
            if (std::abs(b[static_cast<std::size_t>(i)] / b[static_cast<std::size_t>(idx.front())] - 1.0) > 1e-12)
                throw ValidationError("covolume: b must be constant on blocks");
    }
    std::vector<int> prefix;
    for (int i = 0; i < p.prefix_end(prefix_blocks); ++i) prefix.push_back(i);
    return lambda(b, prefix);
}

double covolume_gram(const Eigen::MatrixXd& g, const std::vector<lattice::Vec>& basis) {
    const auto n = g.rows();
    Eigen::MatrixXd v(n, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t c = 0; c < basis.size(); ++c)
        for (Eigen::Index r = 0; r < n; ++r) v(r, static_cast<Eigen::Index>(c)) = static_cast<double>(basis[c][static_cast<std::size_t>(r)]);
    const Eigen::MatrixXd m = g * v;
    return std::sqrt((m.transpose() * m).determinant());
}

namespace {

void compositions(int n, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (n == 0) {
        if (cur.size() >= 2) out.push_back(cur);
        return;
    }
    for (int s = 1; s <= n; ++s) {
        cur.push_back(s);
        compositions(n - s, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<CleanSequenceSpec> enumerate_clean_specs(int max_n) {
    std::vector<CleanSequenceSpec> out;
    for (int n = 2; n <= max_n; ++n) {
        std::vector<std::vector<int>> parts;
        std::vector<int> cur;
        compositions(n, cur, parts);
        for (const auto& sizes : parts) {
            const Partition p(n, sizes);
            const int k0 = p.num_blocks();
            std::vector<int> free_a;
            for (int k = 0; k < k0; ++k)
                if (p.block_size(k) > 1) free_a.push_back(k);
            const int a_count = 1 << free_a.size();
            int b_count = 1;
            for (int k = 0; k + 1 < k0; ++k) b_count *= 3;
            for (int am = 0; am < a_count; ++am)
                for (int bm = 0; bm < b_count; ++bm) {
                    CleanSequenceSpec spec{p, std::vector<ABehavior>(static_cast<std::size_t>(k0), ABehavior::identity),
                                           std::vector<BBehavior>(static_cast<std::size_t>(k0), BBehavior::constant_one)};
                    for (std::size_t i = 0; i < free_a.size(); ++i)
                        if (am >> i & 1) spec.a[static_cast<std::size_t>(free_a[i])] = ABehavior::unbounded;
                    for (int k = 0, rest = bm; k + 1 < k0; ++k, rest /= 3)
                        spec.b[static_cast<std::size_t>(k)] = static_cast<BBehavior>(rest % 3);
                    out.push_back(std::move(spec));
                }
        }
    }
    return out;
}

Instance instantiate(const CleanSequenceSpec& spec, double t) {
    spec.validate();
    const Partition& p = spec.partition;
    Instance inst{std::vector<double>(static_cast<std::size_t>(p.n()), 1.0),
                  std::vector<double>(static_cast<std::size_t>(p.n()), 1.0)};
    double prev = 0.0;
    for (int k = 0; k < p.num_blocks(); ++k) {
        const int s = p.block_size(k);
        if (spec.a[static_cast<std::size_t>(k)] == ABehavior::unbounded)
            for (int i = 0; i < s; ++i) inst.a[static_cast<std::size_t>(p.block_begin(k) + i)] = std::exp(t * (s - 1 - 2.0 * i));
        double log_prefix = 0.0;
        switch (spec.b[static_cast<std::size_t>(k)]) {
        case BBehavior::to_infinity: log_prefix = t; break;
        case BBehavior::constant_one: log_prefix = 0.0; break;
        case BBehavior::to_zero: log_prefix = -t; break;
        }
        for (int i = p.block_begin(k); i < p.block_end(k); ++i) inst.b[static_cast<std::size_t>(i)] = std::exp((log_prefix - prev) / s);
        prev = log_prefix;
    }
    return inst;
}

} // namespace horocount::dynamics
