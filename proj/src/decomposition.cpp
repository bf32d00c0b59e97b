#include <specmor/decomposition.hpp>
#include <specmor/equations.hpp>
#include <specmor/error.hpp>
#include <specmor/spectral.hpp>

#include <cmath>
#include <limits>

namespace specmor
{

namespace
{

template <class Fn>
auto rethrow_as(ErrorKind from1, ErrorKind from2, ErrorKind to, const std::string& what, Fn&& fn)
{
    try
    {
        return fn();
    }
    catch (const Error& err)
    {
        if (err.kind() == from1 || err.kind() == from2)
        {
            throw Error(to, what + " (" + err.what() + ")");
        }
        throw;
    }
}

StandardSystem empty_standard(Index m, Index p, const Matrix& d, TimeDomain time)
{
    return StandardSystem{Matrix::Zero(0, 0), Matrix::Zero(0, m), Matrix::Zero(p, 0), d, time};
}

DescriptorSystem empty_descriptor(Index m, Index p, const Matrix& d, TimeDomain time)
{
    return DescriptorSystem{Matrix::Zero(0, 0), Matrix::Zero(0, 0), Matrix::Zero(0, m), Matrix::Zero(p, 0), d, time};
}

// Trailing `k` right singular vectors of Z.
Matrix trailing_null(const Matrix& z, Index k)
{
    const Svd s = svd_full(z);
    return s.v.rightCols(k);
}

// Null space dimension: the sharpest drop among singular values below
// sqrt(tol) * sigma_1, or the plain rank count when there is no clear gap.
Index null_dimension(const Vector& sigma, double tol)
{
    const Index n = sigma.size();
    if (n == 0)
    {
        return 0;
    }
    const double top = sigma(0);
    if (top == 0.0)
    {
        return n;
    }
    const double floor = std::numeric_limits<double>::epsilon() * top;
    double best = 0.0;
    Index cut = n;
    for (Index i = 1; i < n; ++i)
    {
        if (sigma(i) > std::sqrt(tol) * top)
        {
            continue;
        }
        const double ratio = std::max(sigma(i - 1), floor) / std::max(sigma(i), floor);
        if (ratio > best)
        {
            best = ratio;
            cut = i;
        }
    }
    if (best < 1e3)
    {
        return n - numerical_rank(sigma, tol);
    }
    return n - cut;
}

struct PencilSplit
{
    Matrix l1; // k1 x n rows of Z^{-1}
    Matrix l2; // k2 x n
};

// Left partner of right deflating subspaces V1, V2 of (E, A): Z_i spans
// [E V_i, A V_i]; the rows of [Z_1, Z_2]^{-1} give the block projections.
PencilSplit split_pencil(const Matrix& e, const Matrix& a, const Matrix& v1, const Matrix& v2)
{
    const Index n = e.rows();
    const Index k1 = v1.cols();
    const Index k2 = v2.cols();
    Matrix z(n, n);
    if (k1 > 0)
    {
        Matrix s1(n, 2 * k1);
        s1 << e * v1, a * v1;
        z.leftCols(k1) = svd(s1).u.leftCols(k1);
    }
    if (k2 > 0)
    {
        Matrix s2(n, 2 * k2);
        s2 << e * v2, a * v2;
        z.rightCols(k2) = svd(s2).u.leftCols(k2);
    }
    const Matrix zinv = lu_solve(z, Matrix::Identity(n, n));
    return {zinv.topRows(k1), zinv.bottomRows(k2)};
}

DescriptorSystem project(const DescriptorSystem& sys, const Matrix& wt, const Matrix& v, bool with_d)
{
    DescriptorSystem out;
    out.e = wt * sys.e * v;
    out.a = wt * sys.a * v;
    out.b = wt * sys.b;
    out.c = sys.c * v;
    out.d = with_d ? sys.d : Matrix(Matrix::Zero(sys.d.rows(), sys.d.cols()));
    out.time = sys.time;
    return out;
}

double block_leak(const Matrix& l, const Matrix& m, const Matrix& v, double scale)
{
    if (l.rows() == 0 || v.cols() == 0)
    {
        return 0.0;
    }
    return (l * m * v).norm() / std::max(scale, std::numeric_limits<double>::min());
}

// Finite-part stable / antistable split of a pencil with invertible E.
struct FiniteSplit
{
    Matrix vs, vu, ls, lu;
    int iterations = 0;
};

FiniteSplit split_finite(const Matrix& e, const Matrix& a, TimeDomain time, const OptionTree& sign_opts)
{
    const Index n = e.rows();
    FiniteSplit out;
    if (n == 0)
    {
        out.vs = out.vu = Matrix::Zero(0, 0);
        out.ls = out.lu = Matrix::Zero(0, 0);
        return out;
    }
    // Continuous: sign(A, E). Discrete: sign(A - E, A + E) maps the unit
    // disk onto the left half-plane.
    const Matrix as = time == TimeDomain::Continuous ? a : Matrix(a - e);
    const Matrix es = time == TimeDomain::Continuous ? e : Matrix(a + e);
    const SignResult sr = rethrow_as(ErrorKind::SingularIterate, ErrorKind::SingularE, ErrorKind::AxisEigenvalue,
                                     time == TimeDomain::Continuous ? "eigenvalue on the imaginary axis"
                                                                    : "eigenvalue on the unit circle",
                                     [&] { return generalized_matrix_sign(as, es, sign_opts); });
    out.iterations = sr.iterations;
    const Matrix sn = rethrow_as(ErrorKind::SingularMatrix, ErrorKind::SingularMatrix, ErrorKind::AxisEigenvalue,
                                 "pencil split", [&] { return lu_solve(es, sr.s); });
    const Index k = stable_dimension(sn);
    if (k < 0 || k > n)
    {
        throw Error(ErrorKind::AxisEigenvalue, "sign function trace out of range");
    }
    out.vs = trailing_null(es + sr.s, k);
    out.vu = trailing_null(es - sr.s, n - k);
    const PencilSplit ps = rethrow_as(ErrorKind::SingularMatrix, ErrorKind::SingularMatrix,
                                      ErrorKind::AxisEigenvalue, "deflating subspaces not complementary",
                                      [&] { return split_pencil(e, a, out.vs, out.vu); });
    out.ls = ps.l1;
    out.lu = ps.l2;
    return out;
}

struct InfiniteSplit
{
    Matrix vf, vi, lf, li;
    double alpha = 0.0;
    int iterations = 0;
    int attempts = 0;
};

bool nilpotent_block(const Matrix& ei, const Matrix& ai, double e_scale)
{
    const Index k = ei.rows();
    if (k == 0)
    {
        return true;
    }
    Matrix nmat;
    try
    {
        nmat = lu_solve(ai, ei);
    }
    catch (const Error&)
    {
        return false;
    }
    const double nn = nmat.norm();
    if (nn <= 1e-10 * e_scale * lu_solve(ai, Matrix::Identity(k, k)).norm())
    {
        return true;
    }
    // Jordan blocks of size j perturb zero eigenvalues by about eps^(1/j) |N|.
    const Eigen::EigenSolver<Matrix> es(nmat, false);
    return es.eigenvalues().cwiseAbs().maxCoeff() <= 1e-3 * nn;
}

bool well_conditioned(const Matrix& e)
{
    if (e.rows() == 0)
    {
        return true;
    }
    const Vector s = svd(e).sigma;
    return s(0) > 0.0 && s(s.size() - 1) > 1e-10 * s(0);
}

InfiniteSplit split_infinite(const DescriptorSystem& sys, const OptionTree& opts)
{
    const Index n = sys.order();
    const Matrix& e = sys.e;
    const Matrix& a = sys.a;
    InfiniteSplit out;
    const double anorm = a.norm();
    double alpha = opts.number("alpha");
    if (!(alpha > 0.0))
    {
        alpha = anorm > 0.0 ? e.norm() / anorm : 1.0;
    }
    const bool refine = opts.flag("alpha_refine");
    const double rank_tol = std::max(opts.child("nullspace").number("rank_tol"), 1e-13);
    const Index rank_e = numerical_rank(svd(e).sigma, 1e-10);
    const int attempts = refine ? 5 : 1;
    std::string last_problem = "disk iteration failed";
    for (int attempt = 0; attempt < attempts; ++attempt, alpha /= 100.0)
    {
        out.attempts = attempt + 1;
        DiskResult dr;
        try
        {
            dr = inverse_free_disk(e, alpha * a, opts.child("disk"));
        }
        catch (const Error& err)
        {
            if (err.kind() == ErrorKind::MaxIterExceeded || err.kind() == ErrorKind::RankDeficientStack)
            {
                last_problem = err.what();
                continue;
            }
            throw;
        }
        const Svd sa = svd_full(dr.atil);
        const Index kin = null_dimension(sa.sigma, rank_tol);
        if (kin < n - rank_e)
        {
            last_problem = "infinite part smaller than the rank deficiency of E";
            continue;
        }
        const Matrix vi = sa.v.rightCols(kin);
        const Matrix vf = trailing_null(dr.etil, n - kin);
        PencilSplit ps;
        try
        {
            ps = split_pencil(e, a, vf, vi);
        }
        catch (const Error&)
        {
            last_problem = "deflating subspaces not complementary";
            continue;
        }
        const double scale = std::max(e.norm(), anorm);
        const double leak = std::max({block_leak(ps.l2, e, vf, scale), block_leak(ps.l2, a, vf, scale),
                                      block_leak(ps.l1, e, vi, scale), block_leak(ps.l1, a, vi, scale)});
        const Matrix ef = ps.l1 * e * vf;
        if (leak > 1e-6 || !well_conditioned(ef) || !nilpotent_block(ps.l2 * e * vi, ps.l2 * a * vi, e.norm()))
        {
            last_problem = "split does not separate finite and infinite eigenvalues";
            continue;
        }
        out.vf = vf;
        out.vi = vi;
        out.lf = ps.l1;
        out.li = ps.l2;
        out.alpha = alpha;
        out.iterations = dr.iterations;
        return out;
    }
    throw Error(ErrorKind::InfiniteSplitFailure, last_problem);
}

} // namespace

SubsystemDecomposition decompose_standard(const StandardSystem& sys, const OptionTree& user)
{
    const OptionTree opts = resolve_options("decompose", user);
    const ValidationReport rep = validate(sys);
    if (!rep.ok())
    {
        throw Error(ErrorKind::DimensionMismatch, "invalid system: " + rep.issues.front());
    }
    const Index n = sys.order();
    const Index m = sys.inputs();
    const Index p = sys.outputs();
    SubsystemDecomposition out;
    out.transform_info.set("class", sys.time == TimeDomain::Continuous ? "ct_ss" : "dt_ss");

    if (opts.flag("stable_known") || n == 0)
    {
        out.stable = sys;
        out.ns = n;
        out.v_stable = Matrix::Identity(n, n);
        out.w_stable = Matrix::Identity(n, n);
        out.transform_info.set("bypassed", true).set("ns", n).set("nu", 0).set("ninf", 0);
        return out;
    }

    const Matrix eye = Matrix::Identity(n, n);
    Matrix target = sys.a;
    if (sys.time == TimeDomain::Discrete)
    {
        target = rethrow_as(ErrorKind::SingularMatrix, ErrorKind::SingularMatrix, ErrorKind::AxisEigenvalue,
                            "eigenvalue -1 on the unit circle", [&] { return lu_solve(sys.a + eye, sys.a - eye); });
    }
    const SignResult sr = rethrow_as(ErrorKind::SingularIterate, ErrorKind::MaxIterExceeded, ErrorKind::AxisEigenvalue,
                                     "eigenvalue on the stability boundary",
                                     [&] { return matrix_sign(target, opts.child("sign")); });
    const Index k = stable_dimension(sr.s);
    out.transform_info.set("sign_iterations", sr.iterations);
    if (k < 0 || k > n)
    {
        throw Error(ErrorKind::AxisEigenvalue, "sign function trace out of range");
    }

    if (k == n)
    {
        out.stable = sys;
        out.ns = n;
        out.v_stable = eye;
        out.w_stable = eye;
        out.transform_info.set("ns", n).set("nu", 0).set("ninf", 0);
        return out;
    }

    const PivotedQr qr = qr_pivoted(eye - sr.s);
    const Matrix q1 = qr.q.leftCols(k);
    const Matrix q2 = qr.q.rightCols(n - k);
    const Matrix ah = qr.q.transpose() * sys.a * qr.q;
    const double leak = ah.bottomLeftCorner(n - k, k).norm() / std::max(ah.norm(), 1e-300);
    if (leak > 1e-6)
    {
        throw Error(ErrorKind::AxisEigenvalue, "invariant subspace extraction failed (eigenvalues near the boundary)");
    }
    const Matrix as = ah.topLeftCorner(k, k);
    const Matrix au = ah.bottomRightCorner(n - k, n - k);
    const Matrix wa = ah.topRightCorner(k, n - k);
    InfoTree syl_info;
    const Matrix x = rethrow_as(
        ErrorKind::SpectraOverlap, ErrorKind::MaxIterExceeded, ErrorKind::SylvesterFailure, "coupling equation",
        [&] { return solve_sylvester(as, au, wa, sys.time, opts.child("sylvester"), &syl_info); });
    out.transform_info.set_child("sylvester", syl_info);

    const Matrix bh = qr.q.transpose() * sys.b;
    const Matrix ch = sys.c * qr.q;
    StandardSystem st{as, bh.topRows(k) - x * bh.bottomRows(n - k), ch.leftCols(k), sys.d, sys.time};
    StandardSystem un{au, bh.bottomRows(n - k), ch.leftCols(k) * x + ch.rightCols(n - k),
                      Matrix::Zero(p, m), sys.time};
    out.stable = k > 0 ? st : empty_standard(m, p, sys.d, sys.time);
    out.antistable = un;
    out.ns = k;
    out.nu = n - k;
    out.v_stable = q1;
    out.w_stable = (q1.transpose() - x * q2.transpose()).transpose();
    out.v_antistable = q1 * x + q2;
    out.w_antistable = q2;
    out.transform_info.set("ns", k).set("nu", n - k).set("ninf", 0);
    return out;
}

SubsystemDecomposition decompose_descriptor(const DescriptorSystem& sys, const OptionTree& user)
{
    const OptionTree opts = resolve_options("decompose", user);
    const ValidationReport rep = validate(sys);
    for (const auto& issue : rep.issues)
    {
        if (issue != "pencil possibly singular")
        {
            throw Error(ErrorKind::DimensionMismatch, "invalid system: " + issue);
        }
    }
    const Index n = sys.order();
    const Index m = sys.inputs();
    const Index p = sys.outputs();
    SubsystemDecomposition out;
    out.transform_info.set("class", sys.time == TimeDomain::Continuous ? "ct_dss" : "dt_dss");
    const Matrix eye = Matrix::Identity(n, n);

    if (opts.flag("stable_known") || n == 0)
    {
        out.stable = sys;
        out.ns = n;
        out.v_stable = eye;
        out.w_stable = eye;
        out.transform_info.set("bypassed", true).set("ns", n).set("nu", 0).set("ninf", 0);
        return out;
    }

    // Finite / infinite split.
    Matrix vf = eye;
    Matrix lf = eye;
    Matrix vi = Matrix::Zero(n, 0);
    Matrix li = Matrix::Zero(0, n);
    if (!well_conditioned(sys.e))
    {
        const InfiniteSplit is = split_infinite(sys, opts);
        vf = is.vf;
        lf = is.lf;
        vi = is.vi;
        li = is.li;
        out.transform_info.set("alpha", is.alpha).set("disk_iterations", is.iterations).set("alpha_attempts",
                                                                                             is.attempts);
    }
    const Index ninf = vi.cols();
    const Matrix ef = lf * sys.e * vf;
    const Matrix af = lf * sys.a * vf;

    // Stable / antistable split of the finite part.
    const FiniteSplit fs = split_finite(ef, af, sys.time, opts.child("sign"));
    out.transform_info.set("sign_iterations", fs.iterations);
    const Index ns = fs.vs.cols();
    const Index nu = fs.vu.cols();

    out.v_stable = vf * fs.vs;
    out.w_stable = (fs.ls * lf).transpose();
    out.v_antistable = vf * fs.vu;
    out.w_antistable = (fs.lu * lf).transpose();
    out.v_infinite = vi;
    out.w_infinite = li.transpose();
    out.ns = ns;
    out.nu = nu;
    out.ninf = ninf;

    if (ns > 0)
    {
        out.stable = project(sys, out.w_stable.transpose(), out.v_stable, true);
    }
    else
    {
        out.stable = empty_descriptor(m, p, sys.d, sys.time);
    }
    if (nu > 0)
    {
        out.antistable = project(sys, out.w_antistable.transpose(), out.v_antistable, false);
    }
    if (ninf > 0)
    {
        out.infinite = project(sys, li, vi, false);
    }
    out.transform_info.set("ns", ns).set("nu", nu).set("ninf", ninf);
    return out;
}

SubsystemDecomposition decompose(const System& sys, const OptionTree& opts)
{
    if (const auto* s = std::get_if<StandardSystem>(&sys))
    {
        return decompose_standard(*s, opts);
    }
    if (const auto* s = std::get_if<DescriptorSystem>(&sys))
    {
        return decompose_descriptor(*s, opts);
    }
    throw Error(ErrorKind::InvalidArgument, "additive decomposition applies to first-order systems");
}

System couple(const std::vector<System>& parts)
{
    if (parts.empty())
    {
        throw Error(ErrorKind::DimensionMismatch, "nothing to couple");
    }
    const Index m = inputs(parts.front());
    const Index p = outputs(parts.front());
    const TimeDomain time = time_domain(parts.front());
    bool all_standard = true;
    std::vector<DescriptorSystem> ds;
    for (const auto& part : parts)
    {
        if (std::holds_alternative<SecondOrderSystem>(part))
        {
            throw Error(ErrorKind::InvalidArgument, "cannot couple second-order systems");
        }
        if (inputs(part) != m || outputs(part) != p || time_domain(part) != time)
        {
            throw Error(ErrorKind::DimensionMismatch, "coupled parts must share inputs, outputs and time domain");
        }
        if (const auto* s = std::get_if<StandardSystem>(&part))
        {
            ds.push_back(to_descriptor(*s));
        }
        else
        {
            all_standard = false;
            ds.push_back(std::get<DescriptorSystem>(part));
        }
    }
    Index n = 0;
    for (const auto& d : ds)
    {
        n += d.order();
    }
    DescriptorSystem out{Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, m), Matrix::Zero(p, n),
                         Matrix::Zero(p, m), time};
    Index off = 0;
    for (const auto& d : ds)
    {
        const Index k = d.order();
        out.e.block(off, off, k, k) = d.e;
        out.a.block(off, off, k, k) = d.a;
        out.b.middleRows(off, k) = d.b;
        out.c.middleCols(off, k) = d.c;
        out.d += d.d;
        off += k;
    }
    if (all_standard)
    {
        return StandardSystem{out.a, out.b, out.c, out.d, time};
    }
    return out;
}

System recombine(const SubsystemDecomposition& parts)
{
    std::vector<System> list{parts.stable};
    if (parts.antistable)
    {
        list.push_back(*parts.antistable);
    }
    if (parts.infinite)
    {
        list.push_back(*parts.infinite);
    }
    return couple(list);
}

} // namespace specmor
