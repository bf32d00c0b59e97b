#include <specmor/equations.hpp>
#include <specmor/error.hpp>
#include <specmor/spectral.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <numbers>

namespace specmor
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

double auto_tol(double configured, Index n)
{
    return configured > 0.0 ? configured : 10.0 * static_cast<double>(std::max<Index>(n, 1)) * kEps;
}

bool is_identity(const Matrix& e)
{
    return e.size() == 0 || e.isIdentity(0.0);
}

// X^{-1} B with singular iterates reported as `kind`.
Matrix solve_or(const Matrix& x, const Matrix& b, ErrorKind kind, const char* what)
{
    try
    {
        return lu_solve(x, b);
    }
    catch (const Error& err)
    {
        if (err.kind() == ErrorKind::SingularMatrix)
        {
            throw Error(kind, what);
        }
        throw;
    }
}

// One Newton step of the generalized sign iteration on (A, E) in the form
// A' = (A / c + c E A^{-1} E) / 2. Returns c; `ainv_e` receives A^{-1} E.
struct LyapStep
{
    Matrix next;
    Matrix ainv_e;
    double c = 1.0;
    double change = 0.0;
};

LyapStep lyap_sign_step(const Matrix& ak, const Matrix& e, bool e_identity, bool scaling, double scaling_switch)
{
    LyapStep out;
    const Index n = ak.rows();
    out.ainv_e = solve_or(ak, e_identity ? Matrix(Matrix::Identity(n, n)) : e, ErrorKind::UnstableSpectrum,
                          "Lyapunov iterate singular: eigenvalue on the imaginary axis");
    const Matrix eae = e_identity ? out.ainv_e : Matrix(e * out.ainv_e);
    const double anorm = ak.norm();
    if (scaling && (ak - eae).norm() > scaling_switch * anorm)
    {
        out.c = std::sqrt(anorm / eae.norm());
    }
    out.next = (ak / out.c + out.c * eae) / 2.0;
    out.change = (out.next - ak).norm() / anorm;
    return out;
}

void check_converged_to_minus_e(const Matrix& ak, const Matrix& e, bool e_identity)
{
    const Index n = ak.rows();
    const Matrix target = e_identity ? Matrix(-Matrix::Identity(n, n)) : Matrix(-e);
    if ((ak - target).norm() > 1e-6 * target.norm())
    {
        throw Error(ErrorKind::UnstableSpectrum, "coefficient matrix is not stable (sign iteration did not reach -E)");
    }
}

Matrix lyap_continuous_factor(const Matrix& a, const Matrix& e, const Matrix& f, const OptionTree& opts,
                              const OptionTree& sign_opts, InfoTree* info)
{
    const Index n = a.rows();
    const bool eid = is_identity(e);
    const double tol = auto_tol(opts.number("tol"), n);
    const long max_iter = opts.integer("max_iter");
    const double ctol = opts.number("compress_tol");
    const bool scaling = sign_opts.flag("scaling");
    const double sw = sign_opts.number("scaling_switch");

    Matrix ak = a;
    Matrix z = compress_columns(f, ctol);
    double prev = std::numeric_limits<double>::infinity();
    for (long k = 0; k < max_iter; ++k)
    {
        LyapStep step = lyap_sign_step(ak, e, eid, scaling, sw);
        // E A^{-1} Z = E (A^{-1} Z)
        Matrix az = solve_or(ak, z, ErrorKind::UnstableSpectrum, "Lyapunov iterate singular");
        if (!eid)
        {
            az = e * az;
        }
        Matrix stacked(n, z.cols() + az.cols());
        stacked << z, step.c * az;
        z = compress_columns(stacked / std::sqrt(2.0 * step.c), ctol);
        ak = std::move(step.next);
        if (newton_converged(step.change, prev, tol))
        {
            check_converged_to_minus_e(ak, e, eid);
            if (info)
            {
                info->set("iterations", k + 1);
                info->set("rank", z.cols());
            }
            Matrix out = z / std::sqrt(2.0);
            if (!eid)
            {
                out = solve_or(e, out, ErrorKind::SingularE, "E is singular");
            }
            return out;
        }
        prev = step.change;
    }
    throw Error(ErrorKind::MaxIterExceeded, "Lyapunov sign iteration did not converge in " +
                                                std::to_string(max_iter) + " iterations");
}

Matrix lyap_continuous_dense(const Matrix& a, const Matrix& e, const Matrix& w, const OptionTree& opts,
                             const OptionTree& sign_opts, InfoTree* info)
{
    const Index n = a.rows();
    const bool eid = is_identity(e);
    const double tol = auto_tol(opts.number("tol"), n);
    const long max_iter = opts.integer("max_iter");
    const bool scaling = sign_opts.flag("scaling");
    const double sw = sign_opts.number("scaling_switch");

    Matrix ak = a;
    Matrix wk = symmetric_part(w);
    double prev = std::numeric_limits<double>::infinity();
    for (long k = 0; k < max_iter; ++k)
    {
        LyapStep step = lyap_sign_step(ak, e, eid, scaling, sw);
        // E A^{-1} W A^{-T} E^T
        Matrix m = solve_or(ak, wk, ErrorKind::UnstableSpectrum, "Lyapunov iterate singular");
        m = solve_or(ak, m.transpose(), ErrorKind::UnstableSpectrum, "Lyapunov iterate singular").transpose();
        if (!eid)
        {
            m = e * m * e.transpose();
        }
        wk = symmetric_part((wk / step.c + step.c * m) / 2.0);
        ak = std::move(step.next);
        if (newton_converged(step.change, prev, tol))
        {
            check_converged_to_minus_e(ak, e, eid);
            if (info)
            {
                info->set("iterations", k + 1);
            }
            Matrix x = wk / 2.0;
            if (!eid)
            {
                x = solve_or(e, x, ErrorKind::SingularE, "E is singular");
                x = solve_or(e, Matrix(x.transpose()), ErrorKind::SingularE, "E is singular").transpose();
            }
            return symmetric_part(x);
        }
        prev = step.change;
    }
    throw Error(ErrorKind::MaxIterExceeded, "Lyapunov sign iteration did not converge in " +
                                                std::to_string(max_iter) + " iterations");
}

// Squared Smith iteration for  A X A^T - X + F F^T = 0.
Matrix stein_factor(const Matrix& a, const Matrix& f, const OptionTree& opts, InfoTree* info)
{
    const Index n = a.rows();
    const double tol = auto_tol(opts.number("tol"), n);
    const long max_iter = opts.integer("max_iter");
    const double ctol = opts.number("compress_tol");
    Matrix ak = a;
    Matrix z = compress_columns(f, ctol);
    for (long k = 0; k < max_iter; ++k)
    {
        const Matrix az = ak * z;
        const double znorm = z.norm();
        const double aznorm = az.norm();
        if (!std::isfinite(aznorm) || ak.norm() > 1e150)
        {
            throw Error(ErrorKind::UnstableSpectrum, "Stein iteration diverges: spectrum not inside the unit disk");
        }
        Matrix stacked(n, z.cols() + az.cols());
        stacked << z, az;
        z = compress_columns(stacked, ctol);
        ak = ak * ak;
        if (aznorm <= tol * znorm || znorm == 0.0)
        {
            if (info)
            {
                info->set("iterations", k + 1);
                info->set("rank", z.cols());
            }
            return z;
        }
    }
    throw Error(ErrorKind::UnstableSpectrum, "Stein iteration did not converge (spectrum not inside the unit disk)");
}

Matrix stein_dense(const Matrix& a, const Matrix& w, const OptionTree& opts, InfoTree* info)
{
    const Index n = a.rows();
    const double tol = auto_tol(opts.number("tol"), n);
    const long max_iter = opts.integer("max_iter");
    Matrix ak = a;
    Matrix x = symmetric_part(w);
    for (long k = 0; k < max_iter; ++k)
    {
        const Matrix add = ak * x * ak.transpose();
        const double xnorm = x.norm();
        const double addnorm = add.norm();
        if (!std::isfinite(addnorm) || ak.norm() > 1e150)
        {
            throw Error(ErrorKind::UnstableSpectrum, "Stein iteration diverges: spectrum not inside the unit disk");
        }
        x = symmetric_part(x + add);
        ak = ak * ak;
        if (addnorm <= tol * xnorm || xnorm == 0.0)
        {
            if (info)
            {
                info->set("iterations", k + 1);
            }
            return x;
        }
    }
    throw Error(ErrorKind::UnstableSpectrum, "Stein iteration did not converge (spectrum not inside the unit disk)");
}

void check_square(const Matrix& a, const Matrix& e, const char* who)
{
    if (a.rows() != a.cols() || (e.size() != 0 && (e.rows() != a.rows() || e.cols() != a.cols())))
    {
        throw Error(ErrorKind::DimensionMismatch, std::string(who) + ": A and E must be square of equal size");
    }
}

} // namespace

Matrix compress_columns(const Matrix& z, double rel_tol)
{
    if (z.cols() == 0 || z.rows() == 0)
    {
        return Matrix::Zero(z.rows(), 0);
    }
    const Svd s = svd(z);
    const Index r = numerical_rank(s.sigma, rel_tol);
    return s.u.leftCols(r) * s.sigma.head(r).asDiagonal();
}

Matrix psd_factor(const Matrix& x, double rel_tol)
{
    const Index n = x.rows();
    if (n == 0)
    {
        return Matrix::Zero(0, 0);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric_part(x));
    const Vector& lam = eig.eigenvalues();
    const double top = lam.maxCoeff();
    if (!(top > 0.0))
    {
        return Matrix::Zero(n, 0);
    }
    std::vector<Index> keep;
    for (Index i = n - 1; i >= 0; --i)
    {
        if (lam(i) > rel_tol * top)
        {
            keep.push_back(i);
        }
    }
    Matrix out(n, static_cast<Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
    {
        out.col(static_cast<Index>(j)) = eig.eigenvectors().col(keep[j]) * std::sqrt(lam(keep[j]));
    }
    return out;
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& e, const Matrix& f, GramianSide side, TimeDomain time,
                      const OptionTree& user, InfoTree* info)
{
    check_square(a, e, "solve_lyapunov");
    const OptionTree opts = resolve_options("lyapunov", user);
    const OptionTree sign_opts = OptionTree::defaults_for("matrix_sign");
    const Index n = a.rows();
    const bool ctrl = side == GramianSide::Controllability;
    const Matrix rhs = ctrl ? f : Matrix(f.transpose());
    if (rhs.rows() != n)
    {
        throw Error(ErrorKind::DimensionMismatch, "solve_lyapunov: right-hand side factor has wrong size");
    }
    if (n == 0)
    {
        return Matrix::Zero(0, 0);
    }
    const bool eid = is_identity(e);
    const Matrix at = ctrl ? a : Matrix(a.transpose());
    const Matrix et = eid ? Matrix() : (ctrl ? e : Matrix(e.transpose()));
    if (time == TimeDomain::Continuous)
    {
        return lyap_continuous_factor(at, et, rhs, opts, sign_opts, info);
    }
    if (eid)
    {
        return stein_factor(at, rhs, opts, info);
    }
    // A X A^T - E X E^T + F F^T = 0 is a Stein equation for E^{-1} A.
    if (ctrl)
    {
        const Matrix ah = solve_or(e, a, ErrorKind::SingularE, "E is singular");
        const Matrix fh = solve_or(e, rhs, ErrorKind::SingularE, "E is singular");
        return stein_factor(ah, fh, opts, info);
    }
    // Observability: X~ = E^T X E solves the Stein equation for (E^{-1} A)^T.
    const Matrix ao = solve_or(e, a, ErrorKind::SingularE, "E is singular").transpose();
    const Matrix zt = stein_factor(ao, rhs, opts, info);
    return solve_or(e.transpose(), zt, ErrorKind::SingularE, "E is singular");
}

Matrix solve_lyapunov_dense(const Matrix& a, const Matrix& e, const Matrix& w, GramianSide side, TimeDomain time,
                            const OptionTree& user, InfoTree* info)
{
    check_square(a, e, "solve_lyapunov_dense");
    const OptionTree opts = resolve_options("lyapunov", user);
    const OptionTree sign_opts = OptionTree::defaults_for("matrix_sign");
    const Index n = a.rows();
    if (w.rows() != n || w.cols() != n)
    {
        throw Error(ErrorKind::DimensionMismatch, "solve_lyapunov_dense: right-hand side has wrong size");
    }
    if (n == 0)
    {
        return Matrix::Zero(0, 0);
    }
    const bool ctrl = side == GramianSide::Controllability;
    const bool eid = is_identity(e);
    const Matrix at = ctrl ? a : Matrix(a.transpose());
    const Matrix et = eid ? Matrix() : (ctrl ? e : Matrix(e.transpose()));
    if (time == TimeDomain::Continuous)
    {
        return lyap_continuous_dense(at, et, w, opts, sign_opts, info);
    }
    if (eid)
    {
        return stein_dense(at, w, opts, info);
    }
    if (ctrl)
    {
        const Matrix ah = solve_or(e, a, ErrorKind::SingularE, "E is singular");
        Matrix wh = solve_or(e, w, ErrorKind::SingularE, "E is singular");
        wh = solve_or(e, Matrix(wh.transpose()), ErrorKind::SingularE, "E is singular").transpose();
        return stein_dense(ah, wh, opts, info);
    }
    const Matrix ao = solve_or(e, a, ErrorKind::SingularE, "E is singular").transpose();
    Matrix xt = stein_dense(ao, w, opts, info);
    xt = solve_or(e.transpose(), xt, ErrorKind::SingularE, "E is singular");
    xt = solve_or(e.transpose(), Matrix(xt.transpose()), ErrorKind::SingularE, "E is singular").transpose();
    return symmetric_part(xt);
}

Matrix solve_sylvester(const Matrix& p, const Matrix& r, const Matrix& w, TimeDomain time, const OptionTree& user,
                       InfoTree* info)
{
    const OptionTree opts = resolve_options("sylvester", user);
    const Index np = p.rows();
    const Index nr = r.rows();
    if (p.cols() != np || r.cols() != nr || w.rows() != np || w.cols() != nr)
    {
        throw Error(ErrorKind::DimensionMismatch, "solve_sylvester: expected P (k x k), R (l x l), W (k x l)");
    }
    if (np == 0 || nr == 0)
    {
        return Matrix::Zero(np, nr);
    }
    if (time == TimeDomain::Discrete)
    {
        // Cayley transform maps the unit circle onto the imaginary axis.
        const Matrix ip = Matrix::Identity(np, np);
        const Matrix ir = Matrix::Identity(nr, nr);
        const Matrix pc = solve_or(p + ip, p - ip, ErrorKind::SpectraOverlap, "P has eigenvalue -1");
        const Matrix rc = solve_or(r + ir, r - ir, ErrorKind::SpectraOverlap, "R has eigenvalue -1");
        Matrix wc = solve_or(p + ip, w, ErrorKind::SpectraOverlap, "P has eigenvalue -1");
        wc = solve_or(Matrix((r + ir).transpose()), Matrix(wc.transpose()), ErrorKind::SpectraOverlap,
                      "R has eigenvalue -1")
                 .transpose();
        return solve_sylvester(pc, rc, 2.0 * wc, TimeDomain::Continuous, user, info);
    }

    const double tol = auto_tol(opts.number("tol"), np + nr);
    const long max_iter = opts.integer("max_iter");
    const Matrix ip = Matrix::Identity(np, np);
    const Matrix ir = Matrix::Identity(nr, nr);
    Matrix pk = p;
    Matrix rk = r;
    Matrix wk = w;
    double prev = std::numeric_limits<double>::infinity();
    for (long k = 0; k < max_iter; ++k)
    {
        const Matrix pinv = solve_or(pk, ip, ErrorKind::SpectraOverlap, "Sylvester iterate singular");
        const Matrix rinv = solve_or(rk, ir, ErrorKind::SpectraOverlap, "Sylvester iterate singular");
        const double xnorm = std::hypot(pk.norm(), rk.norm());
        const double xinvnorm = std::hypot(pinv.norm(), rinv.norm());
        double c = 1.0;
        const double dist = std::hypot((pk * pk - ip).norm(), (rk * rk - ir).norm());
        if (dist > 0.1)
        {
            c = std::sqrt(xinvnorm / xnorm);
        }
        Matrix pn = 0.5 * (c * pk + pinv / c);
        Matrix rn = 0.5 * (c * rk + rinv / c);
        wk = 0.5 * (c * wk - pinv * wk * rinv / c);
        const double change = std::hypot((pn - pk).norm(), (rn - rk).norm()) / xnorm;
        pk = std::move(pn);
        rk = std::move(rn);
        if (newton_converged(change, prev, tol))
        {
            const bool p_neg = (pk + ip).norm() <= 1e-6 * std::sqrt(static_cast<double>(np));
            const bool p_pos = (pk - ip).norm() <= 1e-6 * std::sqrt(static_cast<double>(np));
            const bool r_neg = (rk + ir).norm() <= 1e-6 * std::sqrt(static_cast<double>(nr));
            const bool r_pos = (rk - ir).norm() <= 1e-6 * std::sqrt(static_cast<double>(nr));
            if (!((p_neg && r_pos) || (p_pos && r_neg)))
            {
                throw Error(ErrorKind::SpectraOverlap,
                            "spectra of P and R are not separated by the stability boundary");
            }
            if (info)
            {
                info->set("iterations", k + 1);
            }
            return r_pos ? Matrix(wk / 2.0) : Matrix(-wk / 2.0);
        }
        prev = change;
    }
    throw Error(ErrorKind::MaxIterExceeded, "Sylvester sign iteration did not converge in " +
                                                std::to_string(max_iter) + " iterations");
}

Matrix solve_care(const Matrix& a, const Matrix& g, const Matrix& q, const OptionTree& user, InfoTree* info)
{
    const OptionTree opts = resolve_options("riccati", user);
    const Index n = a.rows();
    if (a.cols() != n || g.rows() != n || g.cols() != n || q.rows() != n || q.cols() != n)
    {
        throw Error(ErrorKind::DimensionMismatch, "solve_care: A, G, Q must be n x n");
    }
    if (n == 0)
    {
        return Matrix::Zero(0, 0);
    }
    Matrix h(2 * n, 2 * n);
    h << a, -symmetric_part(g), -symmetric_part(q), -a.transpose();
    OptionTree sign_opts;
    sign_opts.set("tol", opts.number("tol")).set("max_iter", opts.integer("max_iter"));
    SignResult sr;
    try
    {
        sr = matrix_sign(h, sign_opts);
    }
    catch (const Error& err)
    {
        if (err.kind() == ErrorKind::SingularIterate || err.kind() == ErrorKind::MaxIterExceeded)
        {
            throw Error(ErrorKind::HamiltonianAxisEigenvalues,
                        "Hamiltonian matrix has eigenvalues on or near the imaginary axis");
        }
        throw;
    }
    const Index k = stable_dimension(sr.s);
    if (k != n)
    {
        throw Error(ErrorKind::SubspaceDimensionMismatch, "stable invariant subspace has dimension " +
                                                              std::to_string(k) + ", expected " + std::to_string(n));
    }
    // (S + I) [I; X] = 0 solved in the least-squares sense.
    const Matrix& s = sr.s;
    Matrix lhs(2 * n, n);
    lhs << s.topRightCorner(n, n), s.bottomRightCorner(n, n) + Matrix::Identity(n, n);
    Matrix rhs(2 * n, n);
    rhs << -(s.topLeftCorner(n, n) + Matrix::Identity(n, n)), -s.bottomLeftCorner(n, n);
    Eigen::ColPivHouseholderQR<Matrix> qr(lhs);
    if (qr.rank() < n)
    {
        throw Error(ErrorKind::SubspaceDimensionMismatch, "stable invariant subspace is not a graph subspace");
    }
    Matrix x = symmetric_part(qr.solve(rhs));
    if (info)
    {
        info->set("iterations", sr.iterations);
        const Matrix res = a.transpose() * x + x * a - x * g * x + q;
        info->set("residual", res.norm() / std::max(q.norm(), 1e-300));
    }
    return x;
}

Matrix solve_care_bc(const Matrix& a, const Matrix& b, const Matrix& c, const OptionTree& opts, InfoTree* info)
{
    return solve_care(a, b * b.transpose(), c.transpose() * c, opts, info);
}

Matrix solve_dare(const Matrix& a, const Matrix& g, const Matrix& q, const OptionTree& user, InfoTree* info)
{
    const OptionTree opts = resolve_options("riccati", user);
    const Index n = a.rows();
    if (a.cols() != n || g.rows() != n || g.cols() != n || q.rows() != n || q.cols() != n)
    {
        throw Error(ErrorKind::DimensionMismatch, "solve_dare: A, G, Q must be n x n");
    }
    if (n == 0)
    {
        return Matrix::Zero(0, 0);
    }
    const Matrix eye = Matrix::Identity(n, n);
    Matrix lhs(2 * n, 2 * n);
    lhs << eye, symmetric_part(g), Matrix::Zero(n, n), a.transpose();
    Matrix rhs(2 * n, 2 * n);
    rhs << a, Matrix::Zero(n, n), -symmetric_part(q), eye;
    OptionTree disk_opts;
    disk_opts.set("tol", opts.number("tol")).set("max_iter", opts.integer("max_iter"));
    DiskResult dr;
    try
    {
        dr = inverse_free_disk(rhs, lhs, disk_opts);
    }
    catch (const Error& err)
    {
        if (err.kind() == ErrorKind::RankDeficientStack || err.kind() == ErrorKind::MaxIterExceeded)
        {
            throw Error(ErrorKind::HamiltonianAxisEigenvalues, "symplectic pencil has eigenvalues on the unit circle");
        }
        throw;
    }
    const SubspaceBasis inside = extract_nullspace_basis(dr.atil);
    if (inside.k != n)
    {
        throw Error(ErrorKind::SubspaceDimensionMismatch, "stable deflating subspace has dimension " +
                                                              std::to_string(inside.k) + ", expected " +
                                                              std::to_string(n));
    }
    const Matrix u1 = inside.q.topRows(n);
    const Matrix u2 = inside.q.bottomRows(n);
    const Matrix x = symmetric_part(solve_or(Matrix(u1.transpose()), Matrix(u2.transpose()),
                                             ErrorKind::SubspaceDimensionMismatch,
                                             "stable deflating subspace is not a graph subspace")
                                        .transpose());
    if (info)
    {
        info->set("iterations", dr.iterations);
        const Matrix res = q + a.transpose() * x * lu_solve(eye + g * x, a) - x;
        info->set("residual", res.norm() / std::max(x.norm(), 1e-300));
    }
    return x;
}

Matrix frequency_selector(const Matrix& a, double omega)
{
    const Index n = a.rows();
    if (std::isinf(omega))
    {
        return 0.5 * Matrix::Identity(n, n);
    }
    if (omega == 0.0 || n == 0)
    {
        return Matrix::Zero(n, n);
    }
    // log of -A + i w I through the real embedding [[Re, -Im], [Im, Re]].
    Matrix big(2 * n, 2 * n);
    const Matrix wi = omega * Matrix::Identity(n, n);
    big << -a, -wi, wi, -a;
    const Matrix lg = big.log();
    return lg.bottomLeftCorner(n, n) / std::numbers::pi;
}

GramianFactors limited_gramians(const DescriptorSystem& sys, const LimitedMode& mode, const OptionTree& user)
{
    const OptionTree opts = resolve_options("gramian", user);
    const OptionTree lyap = opts.child("lyapunov");
    const double ctol = lyap.number("compress_tol");
    const bool modified = opts.flag("modified");
    if (sys.time != TimeDomain::Continuous)
    {
        throw Error(ErrorKind::InvalidArgument, "limited Gramians are implemented for continuous-time systems");
    }
    if (mode.kind == LimitedMode::Kind::Frequency)
    {
        if (!(mode.lo >= 0.0) || !(mode.hi > mode.lo))
        {
            throw Error(ErrorKind::IntervalInvalid, "frequency interval requires 0 <= w1 < w2");
        }
    }
    else if (!(mode.hi > 0.0))
    {
        throw Error(ErrorKind::IntervalInvalid, "time interval requires tf > 0");
    }

    const bool eid = is_identity(sys.e);
    const Matrix a = eid ? sys.a : solve_or(sys.e, sys.a, ErrorKind::SingularE, "E is singular");
    const Matrix b = eid ? sys.b : solve_or(sys.e, sys.b, ErrorKind::SingularE, "E is singular");
    const Matrix& c = sys.c;

    Matrix wc;
    Matrix wo;
    InfoTree info;
    if (mode.kind == LimitedMode::Kind::Frequency)
    {
        const Matrix s = frequency_selector(a, mode.hi) - frequency_selector(a, mode.lo);
        const Matrix bb = b * b.transpose();
        const Matrix cc = c.transpose() * c;
        wc = s * bb + bb * s.transpose();
        wo = s.transpose() * cc + cc * s;
        info.set("kind", "frequency").set("freq_lo", mode.lo);
        info.set("freq_hi", std::isinf(mode.hi) ? Json("inf") : Json(mode.hi));
    }
    else
    {
        const Matrix ex = (a * mode.hi).exp();
        const Matrix f = ex * b;
        const Matrix g = c * ex;
        wc = b * b.transpose() - f * f.transpose();
        wo = c.transpose() * c - g.transpose() * g;
        info.set("kind", "time").set("time_final", mode.hi);
    }
    if (modified)
    {
        const Matrix fc = psd_factor(wc, 0.0);
        const Matrix fo = psd_factor(wo, 0.0);
        wc = fc * fc.transpose();
        wo = fo * fo.transpose();
    }
    info.set("rhs", modified ? "modified" : "unmodified");

    InfoTree ic;
    InfoTree io;
    const Matrix p = solve_lyapunov_dense(a, Matrix(), wc, GramianSide::Controllability, TimeDomain::Continuous, lyap, &ic);
    const Matrix q = solve_lyapunov_dense(a, Matrix(), wo, GramianSide::Observability, TimeDomain::Continuous, lyap, &io);
    info.set_child("controllability", ic);
    info.set_child("observability", io);

    GramianFactors out;
    out.r = psd_factor(p, ctol);
    out.l = psd_factor(q, ctol);
    if (!eid)
    {
        out.l = solve_or(Matrix(sys.e.transpose()), out.l, ErrorKind::SingularE, "E is singular");
    }
    out.method = mode.kind == LimitedMode::Kind::Frequency ? "flbt" : "tlbt";
    out.info = info;
    return out;
}

} // namespace specmor
