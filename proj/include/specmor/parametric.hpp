#ifndef SPECMOR_PARAMETRIC_HPP
#define SPECMOR_PARAMETRIC_HPP

#include <specmor/options.hpp>
#include <specmor/system.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace specmor
{

/// Coefficient function theta(mu) = c0 + c1 mu, tagged "affine:<c0>+mu*<c1>".
struct AffineTerm
{
    std::string theta;
    Matrix a;
};

double theta_value(const std::string& tag, double mu);
std::string affine_tag(double c0, double c1);

///
/// A(mu) = sum_j theta_j(mu) A_j over [mu_lo, mu_hi]. An empty E means the
/// identity (standard system).
///
struct AffineParamSystem
{
    Matrix e;
    std::vector<AffineTerm> terms;
    Matrix b, c, d;
    double mu_lo = 0.0;
    double mu_hi = 0.0;
    TimeDomain time = TimeDomain::Continuous;

    Index order() const { return b.rows(); }
};

/// Throws Error(DimensionMismatch) or Error(InvalidArgument) on bad data.
void validate_param(const AffineParamSystem& sys);

/// The non-parametric system at mu.
System materialize(const AffineParamSystem& sys, double mu);

///
/// Manifest: the system manifest keys (class ct_ss or ct_dss, n, m, p,
/// matrices E, B, C, D) plus
///   "a_terms": [{"theta": "affine:<c0>+mu*<c1>", "file": "A1.mtx"}, ...],
///   "mu_domain": [lo, hi].
///
AffineParamSystem load_param_system(const std::filesystem::path& manifest);
std::filesystem::path save_param_system(const AffineParamSystem& sys, const std::filesystem::path& dir,
                                        const std::string& stem = "param");

/// mu_j = 10^{nu_j}, nu_j the Chebyshev roots of degree k on [log_lo, log_hi], ascending.
Vector sample_parameters(double log_lo, double log_hi, Index k);

struct LocalRom
{
    double mu = 0.0;
    System rom;
    Matrix w, t;
    Vector hsv;
};

///
/// Projection-based reduction of the sampled system at every knot with the
/// reduce option tree (method among the balancing-related projections).
/// Errors are rethrown with the knot value in the message.
///
std::vector<LocalRom> local_roms(const AffineParamSystem& sys, const Vector& knots, const OptionTree& reduce_opts);

enum class BasisKind
{
    Lagrange,
    SplineLinear,
    SplineVarDim,
};

BasisKind parse_basis_kind(const std::string& name);
std::string basis_kind_name(BasisKind kind);

struct InterpolatoryRom
{
    Vector knots;
    std::vector<System> roms;
    BasisKind kind = BasisKind::Lagrange;
};

/// Throws Error(InvalidArgument) for unsorted knots, mismatched roms or too
/// few knots for the basis kind.
InterpolatoryRom interp_rom(const std::vector<LocalRom>& locals, BasisKind kind);
InterpolatoryRom interp_rom(const Vector& knots, const std::vector<System>& roms, BasisKind kind);

///
/// Basis weights at mu on the log10 axis: barycentric Lagrange weights
/// (extrapolating), linear hat functions, or quadratic B-splines whose knot
/// vector averages consecutive sample abscissae. Splines clamp mu to the knot
/// range (info "clamped") or throw Error(MuOutOfDomain) when strict.
///
Vector basis_weights(const InterpolatoryRom& ir, double mu, bool strict = false, InfoTree* info = nullptr);

/// Sum_j w_j(mu) G_j(s) without building the block realization.
ComplexMatrix eval_interp(const InterpolatoryRom& ir, Complex s, double mu, bool strict = false,
                          InfoTree* info = nullptr);

/// Block-diagonal realization with C = [w_1 C_1, ..., w_k C_k], D = sum w_j D_j.
System realize_interp(const InterpolatoryRom& ir, double mu, bool strict = false);

struct PiecewiseRom
{
    AffineParamSystem system;
    bool one_sided = false;
    Matrix w, t;
};

///
/// Concatenated local bases compressed by SVD at relative tolerance tol:
/// two-sided keeps r = min(rank W, rank T) leading left singular vectors of
/// each, one-sided uses one orthonormal basis of [W, T] on both sides. Every
/// affine term is projected separately, so the tags carry over.
///
/// Throws Error(CompressionRankZero).
///
PiecewiseRom piecewise_rom(const AffineParamSystem& sys, const std::vector<LocalRom>& locals, bool one_sided,
                           double tol);

/// W^T E T, W^T A T, W^T B, C T, D of a first-order system.
System project(const System& sys, const Matrix& w, const Matrix& t);

} // namespace specmor

#endif // SPECMOR_PARAMETRIC_HPP
