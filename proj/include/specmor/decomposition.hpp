#ifndef SPECMOR_DECOMPOSITION_HPP
#define SPECMOR_DECOMPOSITION_HPP

#include <specmor/options.hpp>
#include <specmor/system.hpp>

#include <optional>
#include <vector>

namespace specmor
{

///
/// G = G_s + G_u + G_inf. The stable part is always present (possibly of
/// order 0) and carries the whole feedthrough D; the other parts have D = 0.
///
/// For every part the bases satisfy  part.A = W^T A V,  part.E = W^T E V,
/// part.B = W^T B,  part.C = C V  with respect to the original realization
/// (E = I for standard systems).
///
struct SubsystemDecomposition
{
    System stable;
    std::optional<System> antistable;
    std::optional<DescriptorSystem> infinite;
    Index ns = 0;
    Index nu = 0;
    Index ninf = 0;
    Matrix v_stable, w_stable;
    Matrix v_antistable, w_antistable;
    Matrix v_infinite, w_infinite;
    InfoTree transform_info;
};

///
/// Splits a standard system by the sign of A (continuous) or of the Cayley
/// transform (A + I)^{-1}(A - I) (discrete). The stable invariant subspace is
/// read off a pivoted QR of I - sign(.), and the coupling block is removed by
/// a Sylvester equation.
///
/// Throws Error(AxisEigenvalue) and Error(SylvesterFailure).
///
SubsystemDecomposition decompose_standard(const StandardSystem& sys, const OptionTree& opts = {});

///
/// Splits a descriptor system: the infinite eigenvalues are separated first
/// by the inverse-free disk iteration on lambda (alpha A) - E, then the finite
/// part by the generalized sign function. Deflating subspaces are paired with
/// their left counterparts span[E V, A V], which block-diagonalizes the pencil.
///
/// Throws Error(AxisEigenvalue) and Error(InfiniteSplitFailure).
///
SubsystemDecomposition decompose_descriptor(const DescriptorSystem& sys, const OptionTree& opts = {});

/// Dispatch on the system class; second-order systems are rejected.
SubsystemDecomposition decompose(const System& sys, const OptionTree& opts = {});

/// Block-diagonal coupling of the parts. Returns a standard system when every
/// part is standard, a descriptor system otherwise.
System recombine(const SubsystemDecomposition& parts);

/// Block-diagonal coupling of arbitrary first-order systems with shared m, p
/// and time domain; D blocks are summed. Throws Error(DimensionMismatch).
System couple(const std::vector<System>& parts);

} // namespace specmor

#endif // SPECMOR_DECOMPOSITION_HPP
