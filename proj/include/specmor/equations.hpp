#ifndef SPECMOR_EQUATIONS_HPP
#define SPECMOR_EQUATIONS_HPP

#include <specmor/dense.hpp>
#include <specmor/options.hpp>
#include <specmor/system.hpp>

#include <string>

namespace specmor
{

enum class GramianSide
{
    Controllability,
    Observability,
};

// Factored Gramian pair: P = R R^T, Q = L L^T.
struct GramianFactors
{
    Matrix r;
    Matrix l;
    std::string method;
    InfoTree info;
};

/// Column compression: returns U_k diag(s_k) from the SVD of Z, keeping
/// singular values above rel_tol * s_1, so that Z Z^T is preserved.
Matrix compress_columns(const Matrix& z, double rel_tol);

/// Factor Z with X ~ Z Z^T of a symmetric matrix; eigenvalues below
/// rel_tol * lambda_max (including negative ones) are dropped.
Matrix psd_factor(const Matrix& x, double rel_tol);

///
/// Factored Lyapunov / Stein solver. With an empty `e` the identity is used.
///
///   continuous, controllability:  A X E^T + E X A^T + F F^T = 0   (F is n x k)
///   continuous, observability:    A^T X E + E^T X A + F^T F = 0   (F is k x n)
///   discrete,   controllability:  A X A^T - E X E^T + F F^T = 0
///   discrete,   observability:    A^T X A - E^T X E + F^T F = 0
///
/// Returns Z with X = Z Z^T. Continuous equations use the sign-function
/// iteration on (A, E) with the factor updated and compressed every step;
/// discrete ones use the squared Smith iteration on E^{-1} A.
///
/// Throws Error(UnstableSpectrum) when the spectrum is not stable and
/// Error(MaxIterExceeded).
///
Matrix solve_lyapunov(const Matrix& a, const Matrix& e, const Matrix& f, GramianSide side, TimeDomain time,
                      const OptionTree& opts = {}, InfoTree* info = nullptr);

/// Same equations with a general symmetric right-hand side W in place of
/// F F^T (or F^T F); returns the dense solution.
Matrix solve_lyapunov_dense(const Matrix& a, const Matrix& e, const Matrix& w, GramianSide side, TimeDomain time,
                            const OptionTree& opts = {}, InfoTree* info = nullptr);

///
/// Sylvester equation  -P X + X R - W = 0  for P, R with spectra separated by
/// the imaginary axis (continuous) or by the unit circle (discrete; solved
/// after a Cayley transform). Either block may be the stable one.
///
/// Throws Error(SpectraOverlap) and Error(MaxIterExceeded).
///
Matrix solve_sylvester(const Matrix& p, const Matrix& r, const Matrix& w, TimeDomain time,
                       const OptionTree& opts = {}, InfoTree* info = nullptr);

///
/// Stabilizing solution of  A^T X + X A - X G X + Q = 0  (G, Q symmetric)
/// from the sign of the Hamiltonian [[A, -G], [-Q, -A^T]].
///
/// Throws Error(HamiltonianAxisEigenvalues) and
/// Error(SubspaceDimensionMismatch) when the stable invariant subspace is not
/// n-dimensional.
///
Matrix solve_care(const Matrix& a, const Matrix& g, const Matrix& q, const OptionTree& opts = {},
                  InfoTree* info = nullptr);

/// A^T X + X A - X B B^T X + C^T C = 0.
Matrix solve_care_bc(const Matrix& a, const Matrix& b, const Matrix& c, const OptionTree& opts = {},
                     InfoTree* info = nullptr);

///
/// Stabilizing solution of  X = A^T X A - A^T X B (I + B^T X B)^{-1} B^T X A + C^T C
/// written with G = B B^T, Q = C^T C as  X = Q + A^T X (I + G X)^{-1} A.
/// The graph [I; X] spans the deflating subspace of the symplectic pencil
/// lambda [[I, G], [0, A^T]] - [[A, 0], [-Q, I]] inside the unit disk, computed
/// by the inverse-free disk iteration.
///
/// Throws Error(HamiltonianAxisEigenvalues) for eigenvalues on the unit
/// circle and Error(SubspaceDimensionMismatch).
///
Matrix solve_dare(const Matrix& a, const Matrix& g, const Matrix& q, const OptionTree& opts = {},
                  InfoTree* info = nullptr);

struct LimitedMode
{
    enum class Kind
    {
        Frequency,
        Time,
    };
    Kind kind = Kind::Frequency;
    double lo = 0.0; // omega_1 (frequency); unused for time
    double hi = 1.0; // omega_2 (may be +inf) or t_f
};

///
/// Frequency- or time-limited Gramian factors of a continuous system with
/// invertible E (worked on the standard form E^{-1} A, E^{-1} B, C).
///
///   frequency:  A P + P A^T + S B B^T + B B^T S^T = 0,
///               S = (S(w2) - S(w1)),  S(w) = Im log(-A + i w I) / pi
///   time:       A P + P A^T + B B^T - e^{A tf} B B^T e^{A^T tf} = 0
///
/// and the dual observability equations. With gramian option
/// "modified" = true the right-hand sides are replaced by their positive
/// semidefinite parts. The returned L belongs to the generalized form, i.e.
/// Q = L L^T solves the E-weighted observability equation.
///
/// Throws Error(IntervalInvalid) for w1 >= w2, w1 < 0 or tf <= 0.
///
GramianFactors limited_gramians(const DescriptorSystem& sys, const LimitedMode& mode, const OptionTree& gramian_opts = {});

/// Real-arithmetic selector S(w) used above; returns 0.5 I for w = +inf.
Matrix frequency_selector(const Matrix& a, double omega);

} // namespace specmor

#endif // SPECMOR_EQUATIONS_HPP
