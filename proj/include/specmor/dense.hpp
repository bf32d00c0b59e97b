#ifndef SPECMOR_DENSE_HPP
#define SPECMOR_DENSE_HPP

#include <Eigen/Dense>

#include <vector>

namespace specmor
{

// Dense real matrix; every other module is written against this alias.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

bool all_finite(const Matrix& a);

///
/// Solve A X = B by LU with partial pivoting.
///
/// Throws Error(SingularMatrix) when a pivot falls below n * eps * max|A|.
///
Matrix lu_solve(const Matrix& a, const Matrix& b);

/// Inverse via lu_solve(A, I); same singularity threshold.
Matrix inverse(const Matrix& a);

struct PivotedQr
{
    Matrix q;                     // m x m orthogonal
    Matrix r;                     // m x n upper triangular, |diag| nonincreasing
    std::vector<Index> perm;      // A.col(perm[j]) == (Q R).col(j)
};

PivotedQr qr_pivoted(const Matrix& a);

struct Svd
{
    Matrix u;
    Vector sigma; // nonnegative, nonincreasing
    Matrix v;
};

/// Thin SVD (U: m x k, V: n x k with k = min(m, n)).
Svd svd(const Matrix& a);

/// Full SVD (U: m x m, V: n x n).
Svd svd_full(const Matrix& a);

struct NormsAndTrace
{
    double frobenius;
    double two_norm; // largest singular value, computed by SVD
    double trace;
};

NormsAndTrace norms_and_trace(const Matrix& a);

/// Numerical rank at relative tolerance `rel_tol` against sigma_max.
Index numerical_rank(const Vector& sigma, double rel_tol);

/// Orthonormal basis of range(A), truncated at rel_tol * sigma_max.
Matrix orth(const Matrix& a, double rel_tol = 1e-12);

/// Block diagonal concatenation.
Matrix blkdiag(const Matrix& a, const Matrix& b);

inline Matrix symmetric_part(const Matrix& a)
{
    return 0.5 * (a + a.transpose());
}

} // namespace specmor

#endif // SPECMOR_DENSE_HPP
