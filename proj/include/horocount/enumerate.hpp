#pragma once

#include "horocount/errors.hpp"
#include "horocount/integer_matrix.hpp"
#include "horocount/partition.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace horocount::enumerate {

/// True iff delta is block upper triangular and every diagonal block is a
/// signed permutation matrix, i.e. delta lies in G_hor ∩ SL_N(Z).
bool stabilizer_membership(const IntegerMatrix& delta, const Partition& p);

/// g1 and g2 define the same point of Γ/(G_hor ∩ Γ).
bool same_coset(const IntegerMatrix& g1, const IntegerMatrix& g2, const Partition& p);

/// Serialised Hermite normal forms of the prefix lattices g·Z^{I_1 ∪ ... ∪ I_k},
/// k = 1..k0-1. Constant on cosets; used as a bucket key.
std::string invariant_key(const IntegerMatrix& g, const Partition& p);

/// invariant_key refined by exact per-block Gram data (the quadratic form of
/// each block's columns modulo the earlier lattice, up to signed permutation).
/// Still only a bucket key; the BFS confirms membership with same_coset.
std::string bucket_key(const IntegerMatrix& g, const Partition& p);

/// Complete coset invariant: within each block, columns are reduced modulo the
/// lattice of all earlier blocks, normalised up to sign and sorted.
IntegerMatrix canonical_form(const IntegerMatrix& g, const Partition& p);
std::string canonical_key(const IntegerMatrix& g, const Partition& p);

struct CosetRecord {
    IntegerMatrix representative;
    std::string invariant_key;
    double height = 0.0;
    bool boundary = false;  ///< |height - R| ≤ 1e-9
};

enum class Method { bfs, brute };
std::string to_string(Method m);

struct EnumerationReport {
    Partition partition;
    double radius = 0.0;
    std::size_t count = 0;
    Method method = Method::bfs;
    std::vector<CosetRecord> cosets;  ///< empty unless requested
    double seconds = 0.0;
    bool partial = false;

    // parameters actually used
    double margin = 0.0;
    int max_depth = 0;
    int entry_bound = 0;
    std::size_t states = 0;
};

/// Thrown when the search exceeds its state budget; carries what was found.
class EnumerationOverflow : public ResourceError {
public:
    EnumerationOverflow(const std::string& what, EnumerationReport partial_report)
        : ResourceError(what), partial(std::move(partial_report)) {}
    EnumerationReport partial;
};

/// Thrown when the brute-force scan misses a coset found by the BFS.
class InconsistencyError : public ResourceError {
public:
    using ResourceError::ResourceError;
};

int default_max_depth(int n, double radius);
int default_entry_bound(int n, double radius);

struct BfsOptions {
    double margin = 2.0;
    int max_depth = 0;  ///< 0 selects default_max_depth
    std::size_t max_states = 20'000'000;
    unsigned threads = 1;
    bool keep_cosets = true;
};

EnumerationReport enumerate_bfs(const Partition& p, double radius, const BfsOptions& opt = {});

struct BruteOptions {
    int entry_bound = 0;  ///< 0 selects default_entry_bound
    bool stabilize = false;  ///< double the bound until the count is unchanged
    unsigned threads = 1;
    bool keep_cosets = true;
};

EnumerationReport enumerate_brute(const Partition& p, double radius, const BruteOptions& opt = {});

/// Sorted canonical keys of the cosets with height ≤ radius (+1e-9).
std::vector<std::string> coset_keys(const EnumerationReport& report, double radius);

/// Throws InconsistencyError when a BFS coset is absent from the brute-force set.
void check_brute_covers(const EnumerationReport& bfs, const EnumerationReport& brute);

struct RatioRow {
    double radius = 0.0;
    std::size_t count = 0;
    double asymptotic = 0.0;
    std::optional<double> ratio;  ///< undefined when the asymptotic vanishes
};

struct RatioTable {
    std::vector<RatioRow> rows;
    EnumerationReport report;  ///< the single BFS run at the largest radius
};

/// count(R) / (c·R^p·e^{qR}) for every R, from one BFS run at max R.
RatioTable empirical_ratio(const Partition& p, std::span<const double> radii, const BfsOptions& opt = {});

} // namespace horocount::enumerate
