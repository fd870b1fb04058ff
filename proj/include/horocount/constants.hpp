#pragma once

#include "horocount/partition.hpp"

#include <vector>

namespace horocount::constants {

/// Vol(SO_n(R)) for the trace-form metric, closed product
/// 2^{n(n-1)/4} Π_{k=2}^{n} 2π^{k/2}/Γ(k/2).
double vol_so(int n);
/// Same volume by the fibration recursion Vol(SO_n) = Vol(SO_{n-1})·Vol(S^{n-1})·2^{(n-1)/2}.
double vol_so_recursive(int n);
/// Vol(SL_N(R)/SL_N(Z)) = ζ(2)···ζ(N).
double vol_sl_mod(int n);

/// Memoised Vol(SO_n) and Vol(SL_n(R)/SL_n(Z)) for n = 1..max_n. Immutable
/// after construction, so concurrent reads need no locking.
class VolumeTable {
public:
    explicit VolumeTable(int max_n = 16);

    int max_n() const { return static_cast<int>(so_.size()) - 1; }
    double vol_so(int n) const;
    double vol_sl_mod(int n) const;

    /// Copy with one Vol(SO_n) entry scaled; used for fault injection.
    VolumeTable with_scaled_so(int n, double factor) const;

    static const VolumeTable& shared();

private:
    std::vector<double> so_;
    std::vector<double> sl_;
};

/// Relative error |LHS/RHS - 1| of
/// Vol(SO_N)/Vol(SL_N/SL_N(Z)) = 2^{N(N-1)/4} N! (N-1)! / (ξ(2)···ξ(N)).
double xi_identity_check(int n, const VolumeTable& table = VolumeTable::shared());

/// Haar-measure normalisation constants attached to a partition.
struct HaarConstants {
    double vol_k = 0;      ///< Vol(SO_N)
    double vol_k_i0 = 0;   ///< Vol(K_{I0}) = Π Vol(SO_{n_k})
    double c4 = 0;         ///< Langlands decomposition constant
    double c6 = 0;         ///< per-block KAK constant
    double c7 = 0;         ///< Vol(K)·2^{-Σ|I_i||I_j|/2}
};

HaarConstants haar_constants(const Partition& p, const VolumeTable& table = VolumeTable::shared());

/// N(R) ~ coefficient · R^{p} · e^{q R} with p = (N-2)/2 and q = P_N.
struct CountingConstant {
    int n = 0;
    int poly_numerator = 0;   ///< p = poly_numerator / 2
    double exp_rate = 0;
    double coefficient = 0;

    double poly_exponent() const { return poly_numerator / 2.0; }
};

/// Everything that enters the SL_N(Z) counting coefficient, for reporting.
struct CountingBreakdown {
    CountingConstant constant;
    HaarConstants haar;
    double vol_sl = 0;          ///< Vol(SL_N(R)/SL_N(Z))
    long pi0 = 0;               ///< 2^{k0} - 1
    double so_z_order = 0;      ///< Π n_k! 2^{n_k-1} = #(K_{I0} ∩ SL_N(Z))
    double block_factor = 0;    ///< Π Vol(SO_{n_k})/(n_k! 2^{n_k-1})
    double ghor_covolume = 0;   ///< Vol(G_hor/G_hor∩Γ) for Γ = SL_N(Z)
    double prefactor = 0;       ///< (1/2)^{N(N-1)/2} (2π/P_N)^{(N-2)/2}
};

CountingBreakdown counting_breakdown(const Partition& p, const VolumeTable& table = VolumeTable::shared());

/// Counting constant for Γ = SL_N(Z), evaluated from the explicit product formula.
CountingConstant counting_constant(const Partition& p, const VolumeTable& table = VolumeTable::shared());

/// General-lattice form: (1/2)^{N(N-1)/2}(2π/P_N)^{(N-2)/2} ·
/// [Vol(G_hor/G_hor∩Γ)/(2^{k0}-1)] / Vol(K\G/Γ), with the two covolumes supplied
/// by the caller (Vol(K\G/Γ) = Vol(G/Γ)/Vol(K)).
CountingConstant counting_constant_general(const Partition& p, double ghor_covolume, double g_covolume,
                                           const VolumeTable& table = VolumeTable::shared());

/// Closed-form expressions of the two N = 3 worked examples, written out by hand:
/// blocks [1,1,1] → π^{1/2}·3·2^{1/4}/(7 ξ(2)ξ(3)); blocks [2,1] → π^{3/2}/(2^{1/4} ξ(2)ξ(3)).
/// Throws ValidationError for any other partition.
double worked_example_coefficient(const Partition& p);

/// c·R^p·e^{qR}; R = 0 gives 0 when p > 0 and c when p = 0.
double asymptotic_count(const CountingConstant& cc, double radius);

} // namespace horocount::constants
