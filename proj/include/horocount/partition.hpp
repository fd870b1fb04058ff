#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace horocount {

/// Ordered decomposition of {0,...,n-1} into contiguous blocks I_1,...,I_k0.
///
/// Indices are 0-based. Every group attached to the horocycle (U, M, A, K
/// and their products) is indexed by one of these. A partition always has at
/// least two blocks; a single block would make the horocycle a compact orbit.
class Partition {
public:
    /// Throws ValidationError when the sizes do not sum to n, a size is
    /// non-positive, or fewer than two blocks are given.
    Partition(int n, std::vector<int> block_sizes);

    int n() const { return n_; }
    int num_blocks() const { return static_cast<int>(sizes_.size()); }
    int block_size(int k) const { return sizes_.at(k); }
    int block_begin(int k) const { return starts_.at(k); }
    int block_end(int k) const { return starts_.at(k) + sizes_.at(k); }
    int block_of(int i) const;
    bool same_block(int i, int j) const { return block_of(i) == block_of(j); }
    const std::vector<int>& sizes() const { return sizes_; }

    /// Number of indices in I_1 ∪ ... ∪ I_k (k = 0..num_blocks()).
    int prefix_end(int k) const;
    /// Indices of I_k.
    std::vector<int> block_indices(int k) const;

    /// Σ_{s<t} |I_s||I_t|, the dimension of the unipotent radical.
    int off_block_pairs() const;
    /// Σ_k |I_k|(|I_k|-1)/2, the number of intra-block pairs i<j.
    int intra_block_pairs() const;

    /// JSON array of block sizes, e.g. "[2,1]".
    std::string to_json() const;
    static Partition from_json(const std::string& text);

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    int n_;
    std::vector<int> sizes_;
    std::vector<int> starts_;
    std::vector<int> owner_;
};

Partition make_partition(int n, const std::vector<int>& block_sizes);

/// Parses "2,1" style lists (as used on the command line).
std::vector<int> parse_block_list(const std::string& text);

} // namespace horocount
