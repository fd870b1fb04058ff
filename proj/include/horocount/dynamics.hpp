#pragma once

#include "horocount/integer_matrix.hpp"
#include "horocount/partition.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace horocount::dynamics {

/// Limit behaviour of the M-part of a translating sequence on one block.
enum class ABehavior { unbounded, identity };
/// Limit behaviour of the character λ_{I_1 ∪ ... ∪ I_k}(b_n) of one prefix.
enum class BBehavior { to_infinity, constant_one, to_zero };

std::string to_string(ABehavior a);
std::string to_string(BBehavior b);
ABehavior parse_a_behavior(const std::string& text);
BBehavior parse_b_behavior(const std::string& text);

/// Symbolic description of a clean translating sequence: one a-behaviour per
/// block, one b-behaviour per prefix k = 1..k0 (the last is constant_one).
struct CleanSequenceSpec {
    Partition partition;
    std::vector<ABehavior> a;
    std::vector<BBehavior> b;

    /// Throws ValidationError for wrong lengths, a non-constant full prefix,
    /// or an unbounded M-part on a block of size one (such a block carries no
    /// M-part; a sequence must first be passed to a clean subsequence).
    void validate() const;
};

enum class Role { K, M };
/// Where a block of the coarse partition comes from.
enum class Origin {
    merged,         ///< union of several original blocks
    old_unbounded,  ///< a single original block with unbounded M-part
    old_identity,   ///< a single original block with identity M-part
};

std::string to_string(Role r);
std::string to_string(Origin o);

struct CoarseBlock {
    std::vector<int> members;  ///< original block indices, consecutive
    int begin = 0;             ///< first coordinate index
    int end = 0;               ///< one past the last coordinate index
    Origin origin = Origin::merged;
    Role role = Role::M;
};

/// The coarse partition may consist of a single block, so it is stored as a
/// list of blocks rather than as a Partition.
struct LimitClassification {
    bool nondivergent = false;
    std::vector<CoarseBlock> blocks;  ///< empty when divergent

    std::vector<int> coarse_sizes() const;
    std::string to_json() const;
};

LimitClassification classify_limit(const CleanSequenceSpec& spec);

/// The proper prefixes I_1 ∪ ... ∪ I_j, j = 1..k0-1, as coordinate index lists.
std::vector<std::vector<int>> stable_subspaces(const Partition& p);

/// Covolume of the lattice spanned by a·b·e_i over the first `prefix_blocks`
/// blocks, by the closed form λ_prefix(b). `a` must have block determinant one
/// and `b` must be constant on blocks (both as positive diagonals).
double covolume(const Partition& p, std::span<const double> a, std::span<const double> b, int prefix_blocks);

/// sqrt(det((g V)ᵀ(g V))) for the integer basis V of a sublattice.
double covolume_gram(const Eigen::MatrixXd& g, const std::vector<lattice::Vec>& basis);

/// Every clean specification on every partition of n = 2..max_n.
std::vector<CleanSequenceSpec> enumerate_clean_specs(int max_n);

/// A concrete sequence realising a spec: exponents linear in the step t.
struct Instance {
    std::vector<double> a;  ///< positive diagonal with block determinants one
    std::vector<double> b;  ///< positive diagonal constant on blocks
};

Instance instantiate(const CleanSequenceSpec& spec, double t);

} // namespace horocount::dynamics
