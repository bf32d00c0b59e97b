#ifndef SPECMOR_SPECTRAL_HPP
#define SPECMOR_SPECTRAL_HPP

#include <specmor/dense.hpp>
#include <specmor/options.hpp>

#include <optional>
#include <vector>

namespace specmor
{

struct SignResult
{
    Matrix s;
    int iterations = 0;
    std::vector<double> rel_change_history;
};

///
/// Matrix sign function by the Newton iteration
///
///   X_0 = A,  X_{k+1} = (c_k X_k + X_k^{-1} / c_k) / 2,
///
/// with Frobenius-norm scaling c_k = sqrt(|X_k^{-1}|_F / |X_k|_F) while
/// |X_k^2 - I|_F exceeds `scaling_switch`. Stops on
/// |X_{k+1} - X_k|_F <= tol |X_k|_F (tol = 10 n eps by default) or once the
/// change has settled at the rounding floor.
///
/// Throws Error(SingularIterate) when an iterate cannot be inverted (an
/// eigenvalue on the imaginary axis is the usual cause) and
/// Error(MaxIterExceeded).
///
SignResult matrix_sign(const Matrix& a, const OptionTree& opts = {});

///
/// Generalized sign function of the pencil (A, E): returns E sign(E^{-1} A)
/// without forming E^{-1} A, via X_{k+1} = (c X_k + E X_k^{-1} E / c) / 2.
/// The null spaces of E + S and E - S are the right deflating subspaces of
/// the eigenvalues left and right of the imaginary axis.
///
SignResult generalized_matrix_sign(const Matrix& a, const Matrix& e, const OptionTree& opts = {});

struct DiskResult
{
    Matrix atil; // null space: right deflating subspace inside the unit disk
    Matrix etil; // null space: right deflating subspace outside the unit disk
    int iterations = 0;
};

///
/// Inverse-free disk iteration for the pencil lambda X - Y:
/// QR of [X_k; -Y_k] = [[Q11, Q12], [Q21, Q22]] [R; 0], then
/// Y_{k+1} = Q12^T Y_k and X_{k+1} = Q22^T X_k. Converged when the
/// sign-normalized R factor stops changing.
///
DiskResult inverse_free_disk(const Matrix& y, const Matrix& x, const OptionTree& opts = {});

struct SubspaceBasis
{
    Matrix q; // n x k, orthonormal columns
    Index k = 0;
};

/// Numerical null space of Z at a relative rank tolerance (SVD by default,
/// column-pivoted QR with method = "qr"). When `expected_dim` is given the
/// trailing `expected_dim` directions are returned instead.
SubspaceBasis extract_nullspace_basis(const Matrix& z, const OptionTree& opts = {},
                                      std::optional<Index> expected_dim = std::nullopt);

struct ProjectorPair
{
    Matrix stable;     // (I - S) / 2
    Matrix antistable; // (I + S) / 2
};

ProjectorPair stable_projector_pair(const Matrix& s);

/// Number of eigenvalues with negative real part, 0.5 (n - trace(S)).
Index stable_dimension(const Matrix& s);

/// True when all eigenvalues of A lie strictly in the open left half-plane,
/// decided by sign(A) = -I. Returns false if the sign iteration fails.
bool is_hurwitz(const Matrix& a, const OptionTree& opts = {});
bool is_hurwitz(const Matrix& a, const Matrix& e, const OptionTree& opts = {});

/// Shared stopping rule of the Newton-type iterations: converged when the
/// relative change is below `tol`, or when it has stalled at the rounding
/// floor after entering the quadratic phase.
bool newton_converged(double change, double previous_change, double tol);

} // namespace specmor

#endif // SPECMOR_SPECTRAL_HPP
