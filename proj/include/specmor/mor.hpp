#ifndef SPECMOR_MOR_HPP
#define SPECMOR_MOR_HPP

#include <specmor/equations.hpp>
#include <specmor/options.hpp>
#include <specmor/system.hpp>

#include <string>
#include <vector>

namespace specmor
{

/// Method tags accepted by reduce: bt, bst, flbt, tlbt, lqgbt, hinfbt, prbt,
/// brbt, mt, hna.
const std::vector<std::string>& reduction_methods();

///
/// Gramian factor pair of a stable first-order system for one of the
/// balancing-related methods (P = R R^T, Q = L L^T):
///
///   bt      Lyapunov pair
///   flbt    frequency-limited pair on [freq_lo, freq_hi]
///   tlbt    time-limited pair on [0, time_final]
///   lqgbt   control and filter Riccati solutions (unstable systems allowed)
///   hinfbt  H-infinity Riccati pair with coefficient 1 - gamma^{-2}
///   prbt    positive-real Riccati pair, needs D + D^T > 0
///   brbt    bounded-real Riccati pair, needs ||D|| < 1
///   bst     Lyapunov controllability Gramian and the stochastic Riccati
///           observability solution, needs square invertible D
///
/// For descriptor input (invertible E) L is returned for the E-weighted
/// form, so that the Hankel-type values are the singular values of L^T E R.
///
/// Throws Error(GammaInfeasible) and propagated solver errors.
///
GramianFactors gramian_pair(const System& sys, const std::string& method, const OptionTree& gramian_opts = {});

struct Truncation
{
    System rom;
    Matrix w; // n x r left basis
    Matrix t; // n x r right basis
    Vector hsv;
    Index order = 0;
};

/// Order for a tolerance: 2 sum sigma for bt/flbt/tlbt/brbt, the
/// normalized coprime factor bound for lqgbt, the relative product bound for
/// bst, sum sigma for hna and sigma_{r+1} / sigma_1 <= tol otherwise.
Index order_from_tolerance(const Vector& hsv, const std::string& method, double tol);

///
/// Projection W^T (E, A, B), C T, D from the SVD L^T E R = U S V^T:
/// square-root flavor T = R V_r S_r^{-1/2}, W = L U_r S_r^{-1/2};
/// balancing-free flavor uses orthonormal bases of the same ranges. A
/// standard input yields a standard rom.
///
/// opts: order | tol, flavor ("sqrt" | "bf"), method (for the tolerance rule).
/// Throws Error(OrderTooLarge) when r exceeds the numerical rank.
///
Truncation square_root_truncate(const System& sys, const GramianFactors& factors, const OptionTree& opts = {});

struct ReductionResult
{
    System rom;
    InfoTree info;
};

///
/// Full pipeline: additive decomposition, reduction of the stable part with
/// the requested method, antistable part kept ("keep") or reduced by bt of
/// its mirror image ("mirror"), polynomial part copied, recombination.
/// lqgbt and hinfbt reduce the whole finite part instead. `order` refers to
/// the reduced stable (or finite) part.
///
ReductionResult reduce(const System& sys, const OptionTree& opts = {});

///
/// Keeps the eigenvalues in region_kind ("right_of" | "left_of" with
/// region_shift; "inside_disk" | "outside_disk" with region_shift as center
/// and region_radius) by the additive decomposition of the shifted and
/// scaled system. The polynomial part of a descriptor system is retained.
///
/// Throws Error(RegionBoundaryEigenvalue) and Error(EmptySelection) unless
/// allow_empty is set.
///
ReductionResult modal_truncate(const System& sys, const OptionTree& opts = {});

///
/// Optimal Hankel-norm approximation of a stable continuous-time system from
/// its balanced realization (all-pass dilation at sigma_{r+1}, stable part
/// kept). The feedthrough changes.
///
/// Throws Error(RepeatedSigmaAtCut) when sigma_r and sigma_{r+1} agree to
/// repeat_tol relative to sigma_1.
///
ReductionResult hankel_norm_approx(const System& sys, const OptionTree& opts = {});

/// Hankel singular values of a stable first-order system.
Vector hankel_singular_values(const System& sys, const OptionTree& gramian_opts = {});

/// Largest Hankel singular value.
double hankel_norm(const System& sys, const OptionTree& gramian_opts = {});

/// (-A, B, -C, D) for continuous systems: the transfer function G(-s).
System mirror(const System& sys);

} // namespace specmor

#endif // SPECMOR_MOR_HPP
