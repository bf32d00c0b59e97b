#include <specmor/error.hpp>
#include <specmor/spectral.hpp>

#include <cmath>
#include <limits>

namespace specmor
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

double auto_tol(double configured, Index n)
{
    return configured > 0.0 ? configured : 10.0 * static_cast<double>(std::max<Index>(n, 1)) * kEps;
}

Matrix invert_iterate(const Matrix& x, const Matrix& rhs)
{
    try
    {
        return lu_solve(x, rhs);
    }
    catch (const Error& err)
    {
        if (err.kind() == ErrorKind::SingularMatrix)
        {
            throw Error(ErrorKind::SingularIterate,
                        "sign iterate is numerically singular (eigenvalue on or near the imaginary axis)");
        }
        throw;
    }
}

} // namespace

bool newton_converged(double change, double previous_change, double tol)
{
    if (change <= tol)
    {
        return true;
    }
    // Quadratic phase reached but the change no longer shrinks: rounding floor.
    return previous_change <= 1e-5 && change >= 0.25 * previous_change;
}

SignResult matrix_sign(const Matrix& a, const OptionTree& user)
{
    const OptionTree opts = resolve_options("matrix_sign", user);
    const Index n = a.rows();
    if (a.cols() != n)
    {
        throw Error(ErrorKind::DimensionMismatch, "matrix_sign: matrix is not square");
    }
    SignResult out;
    if (n == 0)
    {
        out.s = Matrix(0, 0);
        return out;
    }
    const double tol = auto_tol(opts.number("tol"), n);
    const long max_iter = opts.integer("max_iter");
    const bool scaling = opts.flag("scaling");
    const double scaling_switch = opts.number("scaling_switch");
    const Matrix eye = Matrix::Identity(n, n);

    Matrix x = a;
    double prev_change = std::numeric_limits<double>::infinity();
    for (long k = 0; k < max_iter; ++k)
    {
        const Matrix xinv = invert_iterate(x, eye);
        const double xnorm = x.norm();
        double c = 1.0;
        if (scaling && (x * x - eye).norm() > scaling_switch)
        {
            c = std::sqrt(xinv.norm() / xnorm);
        }
        Matrix next = 0.5 * (c * x + xinv / c);
        const double change = (next - x).norm() / xnorm;
        out.rel_change_history.push_back(change);
        x = std::move(next);
        if (newton_converged(change, prev_change, tol))
        {
            out.s = std::move(x);
            out.iterations = static_cast<int>(k + 1);
            return out;
        }
        prev_change = change;
    }
    throw Error(ErrorKind::MaxIterExceeded, "matrix_sign: no convergence within " + std::to_string(max_iter) +
                                                " iterations");
}

SignResult generalized_matrix_sign(const Matrix& a, const Matrix& e, const OptionTree& user)
{
    const OptionTree opts = resolve_options("matrix_sign", user);
    const Index n = a.rows();
    if (a.cols() != n || e.rows() != n || e.cols() != n)
    {
        throw Error(ErrorKind::DimensionMismatch, "generalized_matrix_sign: A and E must be square of equal size");
    }
    SignResult out;
    if (n == 0)
    {
        out.s = Matrix(0, 0);
        return out;
    }
    try
    {
        (void)lu_solve(e, Matrix::Zero(n, 1));
    }
    catch (const Error& err)
    {
        if (err.kind() == ErrorKind::SingularMatrix)
        {
            throw Error(ErrorKind::SingularE, "generalized_matrix_sign: E is singular");
        }
        throw;
    }
    const double tol = auto_tol(opts.number("tol"), n);
    const long max_iter = opts.integer("max_iter");
    const bool scaling = opts.flag("scaling");
    const double scaling_switch = opts.number("scaling_switch");

    Matrix x = a;
    double prev_change = std::numeric_limits<double>::infinity();
    for (long k = 0; k < max_iter; ++k)
    {
        const Matrix exe = e * invert_iterate(x, e);
        const double xnorm = x.norm();
        double c = 1.0;
        if (scaling && (x - exe).norm() / xnorm > scaling_switch)
        {
            c = std::sqrt(exe.norm() / xnorm);
        }
        Matrix next = 0.5 * (c * x + exe / c);
        const double change = (next - x).norm() / xnorm;
        out.rel_change_history.push_back(change);
        x = std::move(next);
        if (newton_converged(change, prev_change, tol))
        {
            out.s = std::move(x);
            out.iterations = static_cast<int>(k + 1);
            return out;
        }
        prev_change = change;
    }
    throw Error(ErrorKind::MaxIterExceeded, "generalized_matrix_sign: no convergence within " +
                                                std::to_string(max_iter) + " iterations");
}

DiskResult inverse_free_disk(const Matrix& y, const Matrix& x, const OptionTree& user)
{
    const OptionTree opts = resolve_options("disk", user);
    const Index n = y.rows();
    if (y.cols() != n || x.rows() != n || x.cols() != n)
    {
        throw Error(ErrorKind::DimensionMismatch, "inverse_free_disk: X and Y must be square of equal size");
    }
    DiskResult out;
    if (n == 0)
    {
        out.atil = Matrix(0, 0);
        out.etil = Matrix(0, 0);
        return out;
    }
    const double tol = auto_tol(opts.number("tol"), n);
    const long max_iter = opts.integer("max_iter");

    Matrix yk = y;
    Matrix xk = x;
    Matrix r_prev;
    double prev_change = std::numeric_limits<double>::infinity();
    Matrix stack(2 * n, n);
    for (long k = 0; k < max_iter; ++k)
    {
        stack << xk, -yk;
        Eigen::HouseholderQR<Matrix> qr(stack);
        Matrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
        const double rnorm = r.norm();
        const double rmin = r.diagonal().cwiseAbs().minCoeff();
        if (rnorm == 0.0 || rmin <= static_cast<double>(n) * kEps * rnorm * 1e-3)
        {
            throw Error(ErrorKind::RankDeficientStack,
                        "inverse_free_disk: [X; -Y] lost rank (singular pencil suspected)");
        }
        // Householder QR fixes R only up to row signs.
        for (Index i = 0; i < n; ++i)
        {
            if (r(i, i) < 0.0)
            {
                r.row(i) *= -1.0;
            }
        }
        const Matrix q = qr.householderQ();
        const Matrix q12 = q.topRightCorner(n, n);
        const Matrix q22 = q.bottomRightCorner(n, n);
        yk = q12.transpose() * yk;
        xk = q22.transpose() * xk;

        if (k > 0)
        {
            const double change = (r - r_prev).norm() / rnorm;
            if (newton_converged(change, prev_change, tol))
            {
                out.atil = std::move(yk);
                out.etil = std::move(xk);
                out.iterations = static_cast<int>(k + 1);
                return out;
            }
            prev_change = change;
        }
        r_prev = std::move(r);
    }
    throw Error(ErrorKind::MaxIterExceeded, "inverse_free_disk: no convergence within " + std::to_string(max_iter) +
                                                " iterations");
}

SubspaceBasis extract_nullspace_basis(const Matrix& z, const OptionTree& user, std::optional<Index> expected_dim)
{
    const OptionTree opts = resolve_options("nullspace", user);
    const Index n = z.cols();
    SubspaceBasis out;
    if (n == 0)
    {
        out.q = Matrix(0, 0);
        return out;
    }
    const double rank_tol = opts.number("rank_tol");
    const std::string method = opts.text("method");
    if (method == "qr")
    {
        // Z^T P = Q R  =>  null(Z) = span of the trailing columns of Q.
        const PivotedQr qr = qr_pivoted(z.transpose());
        const Index kmax = std::min(z.rows(), n);
        Index rank = 0;
        const double lead = kmax > 0 ? std::abs(qr.r(0, 0)) : 0.0;
        while (rank < kmax && std::abs(qr.r(rank, rank)) > rank_tol * lead)
        {
            ++rank;
        }
        const Index k = expected_dim ? *expected_dim : n - rank;
        out.q = qr.q.rightCols(k);
        out.k = k;
        return out;
    }
    if (method != "svd")
    {
        throw Error(ErrorKind::InvalidArgument, "nullspace method must be 'svd' or 'qr'");
    }
    const Svd s = svd_full(z);
    Index rank = numerical_rank(s.sigma, rank_tol);
    const Index k = expected_dim ? *expected_dim : n - rank;
    if (k < 0 || k > n)
    {
        throw Error(ErrorKind::SubspaceDimensionMismatch, "requested null space dimension out of range");
    }
    out.q = s.v.rightCols(k);
    out.k = k;
    return out;
}

ProjectorPair stable_projector_pair(const Matrix& s)
{
    const Matrix eye = Matrix::Identity(s.rows(), s.cols());
    return {0.5 * (eye - s), 0.5 * (eye + s)};
}

Index stable_dimension(const Matrix& s)
{
    return static_cast<Index>(std::llround(0.5 * (static_cast<double>(s.rows()) - s.trace())));
}

bool is_hurwitz(const Matrix& a, const OptionTree& opts)
{
    if (a.rows() == 0)
    {
        return true;
    }
    try
    {
        const SignResult r = matrix_sign(a, opts);
        const Matrix eye = Matrix::Identity(a.rows(), a.cols());
        return (r.s + eye).norm() <= 1e-6 * std::sqrt(static_cast<double>(a.rows()));
    }
    catch (const Error&)
    {
        return false;
    }
}

bool is_hurwitz(const Matrix& a, const Matrix& e, const OptionTree& opts)
{
    if (a.rows() == 0)
    {
        return true;
    }
    try
    {
        const SignResult r = generalized_matrix_sign(a, e, opts);
        return (r.s + e).norm() <= 1e-6 * e.norm();
    }
    catch (const Error&)
    {
        return false;
    }
}

} // namespace specmor
