#include <specmor/dense.hpp>
#include <specmor/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace specmor
{

bool all_finite(const Matrix& a)
{
    return a.allFinite();
}

Matrix lu_solve(const Matrix& a, const Matrix& b)
{
    if (a.rows() != a.cols())
    {
        throw Error(ErrorKind::DimensionMismatch, "lu_solve: matrix is not square");
    }
    if (a.rows() != b.rows())
    {
        throw Error(ErrorKind::DimensionMismatch, "lu_solve: row count of right-hand side differs");
    }
    const Index n = a.rows();
    if (n == 0)
    {
        return Matrix::Zero(0, b.cols());
    }
    const double max_abs = a.cwiseAbs().maxCoeff();
    const double threshold =
        static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_abs;

    Eigen::PartialPivLU<Matrix> lu(a);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(min_pivot >= threshold) || max_abs == 0.0)
    {
        throw Error(ErrorKind::SingularMatrix, "pivot magnitude below n*eps*max|A|");
    }
    return lu.solve(b);
}

Matrix inverse(const Matrix& a)
{
    return lu_solve(a, Matrix::Identity(a.rows(), a.cols()));
}

PivotedQr qr_pivoted(const Matrix& a)
{
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    PivotedQr out;
    out.q = qr.householderQ();
    out.r = qr.matrixR().triangularView<Eigen::Upper>();
    const auto& indices = qr.colsPermutation().indices();
    out.perm.assign(indices.data(), indices.data() + indices.size());
    return out;
}

namespace
{

Svd run_svd(const Matrix& a, unsigned int flags)
{
    Svd out;
    if (a.size() == 0)
    {
        out.u = Matrix::Identity(a.rows(), (flags & Eigen::ComputeFullU) ? a.rows() : 0);
        out.v = Matrix::Identity(a.cols(), (flags & Eigen::ComputeFullV) ? a.cols() : 0);
        out.sigma = Vector::Zero(0);
        return out;
    }
    Eigen::BDCSVD<Matrix> dec(a, flags);
    if (dec.info() != Eigen::Success)
    {
        throw Error(ErrorKind::ConvergenceFailure, "SVD did not converge");
    }
    out.u = dec.matrixU();
    out.v = dec.matrixV();
    out.sigma = dec.singularValues();
    return out;
}

} // namespace

Svd svd(const Matrix& a)
{
    return run_svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

Svd svd_full(const Matrix& a)
{
    return run_svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

NormsAndTrace norms_and_trace(const Matrix& a)
{
    NormsAndTrace out{};
    out.frobenius = a.norm();
    out.trace = a.rows() == a.cols() ? a.trace() : std::numeric_limits<double>::quiet_NaN();
    if (a.size() == 0)
    {
        out.two_norm = 0.0;
    }
    else
    {
        Eigen::BDCSVD<Matrix> dec(a);
        out.two_norm = dec.singularValues()(0);
    }
    return out;
}

Index numerical_rank(const Vector& sigma, double rel_tol)
{
    if (sigma.size() == 0 || sigma(0) == 0.0)
    {
        return 0;
    }
    const double cut = rel_tol * sigma(0);
    Index r = 0;
    while (r < sigma.size() && sigma(r) > cut)
    {
        ++r;
    }
    return r;
}

Matrix orth(const Matrix& a, double rel_tol)
{
    if (a.cols() == 0)
    {
        return Matrix(a.rows(), 0);
    }
    const Svd s = svd(a);
    return s.u.leftCols(numerical_rank(s.sigma, rel_tol));
}

Matrix blkdiag(const Matrix& a, const Matrix& b)
{
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

} // namespace specmor
