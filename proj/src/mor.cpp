#include <specmor/decomposition.hpp>
#include <specmor/error.hpp>
#include <specmor/mor.hpp>
#include <specmor/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace specmor
{

namespace
{

// First-order realization in generalized form; E = I for standard systems.
struct Gen
{
    Matrix e, a, b, c, d;
    TimeDomain time = TimeDomain::Continuous;
    bool standard = true;
};

Gen generalized(const System& sys)
{
    if (const auto* s = std::get_if<StandardSystem>(&sys))
    {
        return {Matrix::Identity(s->order(), s->order()), s->a, s->b, s->c, s->d, s->time, true};
    }
    if (const auto* s = std::get_if<DescriptorSystem>(&sys))
    {
        return {s->e, s->a, s->b, s->c, s->d, s->time, false};
    }
    throw Error(ErrorKind::InvalidArgument, "first-order system required (use so_reduce for second-order systems)");
}

// Standard-equivalent realization (E^{-1} A, E^{-1} B, C, D).
StandardSystem standard_form(const Gen& g)
{
    if (g.standard)
    {
        return {g.a, g.b, g.c, g.d, g.time};
    }
    try
    {
        return {lu_solve(g.e, g.a), lu_solve(g.e, g.b), g.c, g.d, g.time};
    }
    catch (const Error& err)
    {
        if (err.kind() == ErrorKind::SingularMatrix)
        {
            throw Error(ErrorKind::SingularE, "method needs an invertible E on the reduced part");
        }
        throw;
    }
}

Json to_json(const Vector& v)
{
    return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

bool continuous_only(const std::string& method)
{
    return method != "bt" && method != "lqgbt" && method != "mt";
}

Matrix factor_or_zero(const Matrix& x, double tol)
{
    return x.rows() == 0 ? Matrix(0, 0) : psd_factor(x, tol);
}

double spectral_radius(const Matrix& m)
{
    if (m.rows() == 0)
    {
        return 0.0;
    }
    Eigen::EigenSolver<Matrix> es(m, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_psd(const Matrix& x)
{
    if (x.rows() == 0)
    {
        return true;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric_part(x), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-8 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
}

struct RiccatiPair
{
    Matrix y; // controllability-type
    Matrix x; // observability-type
};

std::optional<RiccatiPair> hinf_pair(const StandardSystem& s, double gamma, const OptionTree& ric)
{
    if (!(gamma > 1.0))
    {
        return std::nullopt;
    }
    const double coef = 1.0 - 1.0 / (gamma * gamma);
    try
    {
        RiccatiPair out;
        out.x = solve_care(s.a, coef * s.b * s.b.transpose(), s.c.transpose() * s.c, ric);
        out.y = solve_care(s.a.transpose(), coef * s.c.transpose() * s.c, s.b * s.b.transpose(), ric);
        if (!is_psd(out.x) || !is_psd(out.y) || spectral_radius(out.x * out.y) >= gamma * gamma)
        {
            return std::nullopt;
        }
        return out;
    }
    catch (const Error&)
    {
        return std::nullopt;
    }
}

RiccatiPair riccati_pair(const StandardSystem& s, const std::string& method, const OptionTree& opts, InfoTree& info)
{
    const OptionTree ric = opts.child("riccati");
    const Matrix& a = s.a;
    const Matrix& b = s.b;
    const Matrix& c = s.c;
    const Matrix& d = s.d;
    const Index m = b.cols();
    const Index p = c.rows();
    RiccatiPair out;
    if (method == "lqgbt")
    {
        if (s.time == TimeDomain::Discrete)
        {
            out.x = solve_dare(a, b * b.transpose(), c.transpose() * c, ric);
            out.y = solve_dare(a.transpose(), c.transpose() * c, b * b.transpose(), ric);
        }
        else
        {
            out.x = solve_care(a, b * b.transpose(), c.transpose() * c, ric);
            out.y = solve_care(a.transpose(), c.transpose() * c, b * b.transpose(), ric);
        }
        return out;
    }
    if (method == "hinfbt")
    {
        const double user_gamma = opts.number("gamma");
        if (user_gamma > 0.0)
        {
            auto pr = hinf_pair(s, user_gamma, ric);
            if (!pr)
            {
                throw Error(ErrorKind::GammaInfeasible, "gamma = " + std::to_string(user_gamma) +
                                                            " admits no stabilizing Riccati pair with rho(XY) < gamma^2");
            }
            info.set("gamma", user_gamma);
            return *pr;
        }
        double hi = 2.0;
        int doublings = 0;
        while (!hinf_pair(s, hi, ric))
        {
            hi *= 2.0;
            if (++doublings > 40)
            {
                throw Error(ErrorKind::GammaInfeasible, "no feasible gamma found below 2^41");
            }
        }
        double lo = 1.0;
        for (int k = 0; k < 60 && hi - lo > 1e-6 * hi; ++k)
        {
            const double mid = 0.5 * (lo + hi);
            if (hinf_pair(s, mid, ric))
            {
                hi = mid;
            }
            else
            {
                lo = mid;
            }
        }
        double gamma = opts.number("gamma_factor") * hi;
        auto pr = hinf_pair(s, gamma, ric);
        if (!pr)
        {
            gamma = hi;
            pr = hinf_pair(s, gamma, ric);
        }
        info.set("gamma_min", hi).set("gamma", gamma);
        return *pr;
    }
    if (method == "prbt")
    {
        if (m != p)
        {
            throw Error(ErrorKind::InvalidArgument, "prbt requires as many inputs as outputs");
        }
        const Matrix r = d + d.transpose();
        Eigen::LLT<Matrix> llt(r);
        if (m == 0 || llt.info() != Eigen::Success)
        {
            throw Error(ErrorKind::InvalidArgument, "prbt requires D + D^T positive definite");
        }
        const Matrix rc = llt.solve(c);
        const Matrix rbt = llt.solve(Matrix(b.transpose()));
        const Matrix abar = a - b * rc;
        out.x = solve_care(abar, -b * rbt, c.transpose() * rc, ric);
        out.y = solve_care(abar.transpose(), -c.transpose() * rc, b * rbt, ric);
        return out;
    }
    if (method == "brbt")
    {
        const double dn = d.size() ? svd(d).sigma(0) : 0.0;
        if (dn >= 1.0)
        {
            throw Error(ErrorKind::InvalidArgument, "brbt requires ||D||_2 < 1");
        }
        const Matrix ro = Matrix::Identity(m, m) - d.transpose() * d;
        const Matrix rc = Matrix::Identity(p, p) - d * d.transpose();
        const Matrix ro_dt = lu_solve(ro, Matrix(d.transpose()));
        const Matrix ro_bt = lu_solve(ro, Matrix(b.transpose()));
        const Matrix rc_c = lu_solve(rc, c);
        const Matrix rc_d = lu_solve(rc, d);
        out.x = solve_care(a + b * ro_dt * c, -b * ro_bt,
                           c.transpose() * (Matrix::Identity(p, p) + d * ro_dt) * c, ric);
        out.y = solve_care((a + b * d.transpose() * rc_c).transpose(), -c.transpose() * rc_c,
                           b * (Matrix::Identity(m, m) + d.transpose() * rc_d) * b.transpose(), ric);
        return out;
    }
    if (method == "bst")
    {
        if (m != p || m == 0)
        {
            throw Error(ErrorKind::InvalidArgument, "bst requires a square invertible D");
        }
        Eigen::FullPivLU<Matrix> lu(d);
        if (!lu.isInvertible())
        {
            throw Error(ErrorKind::InvalidArgument, "bst requires a square invertible D");
        }
        const Matrix rf = solve_lyapunov(a, Matrix(), b, GramianSide::Controllability, TimeDomain::Continuous,
                                         opts.child("lyapunov"));
        out.y = rf * rf.transpose();
        const Matrix bw = out.y * c.transpose() + b * d.transpose();
        const Matrix r = d * d.transpose();
        const Matrix rinv_c = lu_solve(r, c);
        const Matrix rinv_bwt = lu_solve(r, Matrix(bw.transpose()));
        out.x = solve_care(a - bw * rinv_c, -bw * rinv_bwt, c.transpose() * rinv_c, ric);
        return out;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown Riccati method '" + method + "'");
}

Truncation truncate_with(const Gen& g, const GramianFactors& f, Index r, const std::string& flavor, const Vector& hsv,
                         const Svd& s)
{
    Truncation out;
    out.hsv = hsv;
    out.order = r;
    const Index n = g.a.rows();
    if (r == 0)
    {
        out.w = Matrix::Zero(n, 0);
        out.t = Matrix::Zero(n, 0);
    }
    else
    {
        const Vector isq = hsv.head(r).cwiseSqrt().cwiseInverse();
        out.t = f.r * s.v.leftCols(r) * isq.asDiagonal();
        out.w = f.l * s.u.leftCols(r) * isq.asDiagonal();
        if (flavor == "bf")
        {
            out.t = Eigen::HouseholderQR<Matrix>(out.t).householderQ() * Matrix::Identity(n, r);
            out.w = Eigen::HouseholderQR<Matrix>(out.w).householderQ() * Matrix::Identity(n, r);
        }
        else if (flavor != "sqrt")
        {
            throw Error(ErrorKind::InvalidArgument, "flavor must be 'sqrt' or 'bf'");
        }
    }
    const Matrix wt = out.w.transpose();
    Matrix er = wt * g.e * out.t;
    Matrix ar = wt * g.a * out.t;
    Matrix br = wt * g.b;
    const Matrix cr = g.c * out.t;
    if (g.standard)
    {
        if (r > 0)
        {
            ar = lu_solve(er, ar);
            br = lu_solve(er, br);
        }
        out.rom = StandardSystem{ar, br, cr, g.d, g.time};
    }
    else
    {
        out.rom = DescriptorSystem{er, ar, br, cr, g.d, g.time};
    }
    return out;
}

System with_time(System s, TimeDomain time)
{
    std::visit(
        [&](auto& x) {
            if constexpr (!std::is_same_v<std::decay_t<decltype(x)>, SecondOrderSystem>)
            {
                x.time = time;
            }
        },
        s);
    return s;
}

System with_d(System s, const Matrix& d)
{
    std::visit([&](auto& x) { x.d = d; }, s);
    return s;
}

System reduce_hna(const System& st, const OptionTree& opts, InfoTree& info)
{
    const Gen g = generalized(st);
    if (g.time != TimeDomain::Continuous)
    {
        throw Error(ErrorKind::InvalidArgument, "hna is implemented for continuous-time systems");
    }
    const StandardSystem s = standard_form(g);
    const Gen gs = generalized(s);
    const GramianFactors f = gramian_pair(s, "bt", opts.child("gramian"));
    const Svd sv = svd(f.l.transpose() * f.r);
    const Vector hsv = sv.sigma;
    const Index nr = numerical_rank(hsv, 1e-13);
    info.set("hsv", to_json(hsv));
    const long order = opts.integer("order");
    const double tol = opts.number("tol");
    Index r = order >= 0 ? static_cast<Index>(order) : order_from_tolerance(hsv, "hna", tol);
    const Truncation bal = truncate_with(gs, f, nr, "sqrt", hsv, sv);
    if (r >= nr)
    {
        info.set("order", nr);
        return bal.rom;
    }
    const auto& b = std::get<StandardSystem>(bal.rom);
    const double sigma = hsv(r);
    const double rtol = opts.number("repeat_tol") * hsv(0);
    if (r > 0 && hsv(r - 1) - sigma <= rtol)
    {
        throw Error(ErrorKind::RepeatedSigmaAtCut, "sigma_r and sigma_{r+1} coincide at order " + std::to_string(r));
    }
    std::vector<Index> j1;
    std::vector<Index> j2;
    for (Index i = 0; i < nr; ++i)
    {
        (i >= r && std::abs(hsv(i) - sigma) <= rtol ? j2 : j1).push_back(i);
    }
    const Index n1 = static_cast<Index>(j1.size());
    const Index n2 = static_cast<Index>(j2.size());
    const Index m = b.b.cols();
    const Index p = b.c.rows();
    Matrix a11(n1, n1);
    Matrix b1(n1, m);
    Matrix b2(n2, m);
    Matrix c1(p, n1);
    Matrix c2(p, n2);
    Vector s1(n1);
    for (Index i = 0; i < n1; ++i)
    {
        s1(i) = hsv(j1[i]);
        b1.row(i) = b.b.row(j1[i]);
        c1.col(i) = b.c.col(j1[i]);
        for (Index j = 0; j < n1; ++j)
        {
            a11(i, j) = b.a(j1[i], j1[j]);
        }
    }
    for (Index i = 0; i < n2; ++i)
    {
        b2.row(i) = b.b.row(j2[i]);
        c2.col(i) = b.c.col(j2[i]);
    }
    const Matrix u = -Eigen::CompleteOrthogonalDecomposition<Matrix>(c2.transpose()).solve(b2);
    const Vector gamma_inv = (s1.array().square() - sigma * sigma).inverse().matrix();
    const Matrix s1m = s1.asDiagonal();
    const Matrix ah = gamma_inv.asDiagonal() *
                      (sigma * sigma * a11.transpose() + s1m * a11 * s1m - sigma * c1.transpose() * u * b1.transpose());
    const Matrix bh = gamma_inv.asDiagonal() * (s1m * b1 + sigma * c1.transpose() * u);
    const Matrix ch = c1 * s1m + sigma * u * b1.transpose();
    const Matrix dh = b.d - sigma * u;
    const StandardSystem dil{ah, bh, ch, dh, TimeDomain::Continuous};
    OptionTree dopts = opts.child("decompose");
    const SubsystemDecomposition dec = decompose_standard(dil, dopts);
    info.set("dilation_order", n1).set("dilation_stable", dec.ns).set("sigma_cut", sigma);
    info.set("order", dec.ns);
    return dec.stable;
}

System reduce_stable_part(const System& st, const std::string& method, const OptionTree& opts, InfoTree& info)
{
    if (order(st) == 0)
    {
        info.set("order", 0);
        return st;
    }
    if (method == "hna")
    {
        return reduce_hna(st, opts, info);
    }
    const GramianFactors f = gramian_pair(st, method, opts.child("gramian"));
    info.set_child("gramian", f.info);
    const Truncation tr = square_root_truncate(st, f, opts);
    info.set("hsv", to_json(tr.hsv)).set("order", tr.order);
    return tr.rom;
}

System reduce_mirrored(const System& au, const OptionTree& opts, InfoTree& info)
{
    if (time_domain(au) != TimeDomain::Continuous)
    {
        throw Error(ErrorKind::InvalidArgument, "antistable = mirror needs a continuous-time system");
    }
    const System mir = mirror(au);
    const GramianFactors f = gramian_pair(mir, "bt", opts.child("gramian"));
    const Gen g = generalized(mir);
    const Svd s = svd(f.l.transpose() * g.e * f.r);
    const double tol = opts.number("tol");
    const Index r = tol > 0.0 ? order_from_tolerance(s.sigma, "bt", tol) : numerical_rank(s.sigma, 1e-12);
    info.set("hsv", to_json(s.sigma)).set("order", r);
    return mirror(truncate_with(g, f, r, opts.text("flavor"), s.sigma, s).rom);
}

bool e_invertible(const Matrix& e)
{
    if (e.rows() == 0)
    {
        return true;
    }
    const Vector s = svd(e).sigma;
    return s(s.size() - 1) > 1e-10 * s(0);
}

void check_request(const OptionTree& opts)
{
    const bool has_order = opts.integer("order") >= 0;
    const bool has_tol = opts.number("tol") > 0.0;
    if (has_order == has_tol)
    {
        throw Error(ErrorKind::InvalidArgument, "set exactly one of 'order' and 'tol'");
    }
}

} // namespace

const std::vector<std::string>& reduction_methods()
{
    static const std::vector<std::string> names{"bt", "bst", "flbt", "tlbt", "lqgbt",
                                                "hinfbt", "prbt", "brbt", "mt", "hna"};
    return names;
}

GramianFactors gramian_pair(const System& sys, const std::string& method, const OptionTree& user)
{
    const OptionTree opts = resolve_options("gramian", user);
    const Gen g = generalized(sys);
    if (g.time == TimeDomain::Discrete && continuous_only(method))
    {
        throw Error(ErrorKind::InvalidArgument, "method '" + method + "' supports continuous-time systems only");
    }
    const double ctol = opts.child("lyapunov").number("compress_tol");
    GramianFactors out;
    out.method = method;
    if (method == "bt")
    {
        const Matrix e = g.standard ? Matrix() : g.e;
        InfoTree ic;
        InfoTree io;
        out.r = solve_lyapunov(g.a, e, g.b, GramianSide::Controllability, g.time, opts.child("lyapunov"), &ic);
        out.l = solve_lyapunov(g.a, e, g.c, GramianSide::Observability, g.time, opts.child("lyapunov"), &io);
        out.info.set_child("controllability", ic);
        out.info.set_child("observability", io);
        return out;
    }
    if (method == "flbt" || method == "tlbt")
    {
        const DescriptorSystem ds{g.e, g.a, g.b, g.c, g.d, g.time};
        LimitedMode mode;
        if (method == "flbt")
        {
            mode = {LimitedMode::Kind::Frequency, opts.number("freq_lo"), opts.number("freq_hi")};
        }
        else
        {
            mode = {LimitedMode::Kind::Time, 0.0, opts.number("time_final")};
        }
        return limited_gramians(ds, mode, opts);
    }
    if (method == "lqgbt" || method == "hinfbt" || method == "prbt" || method == "brbt" || method == "bst")
    {
        const StandardSystem s = standard_form(g);
        const RiccatiPair pr = riccati_pair(s, method, opts, out.info);
        out.r = factor_or_zero(pr.y, ctol);
        out.l = factor_or_zero(pr.x, ctol);
        if (!g.standard)
        {
            out.l = lu_solve(Matrix(g.e.transpose()), out.l);
        }
        return out;
    }
    throw Error(ErrorKind::InvalidArgument, "no Gramian pair for method '" + method + "'");
}

Index order_from_tolerance(const Vector& hsv, const std::string& method, double tol)
{
    const Index n = hsv.size();
    if (n == 0)
    {
        return 0;
    }
    auto tail_sum = [&](auto term) {
        // smallest r with sum_{i >= r} term(sigma_i) <= tol
        double acc = 0.0;
        Index r = n;
        for (Index i = n - 1; i >= 0; --i)
        {
            acc += term(hsv(i));
            if (acc > tol)
            {
                break;
            }
            r = i;
        }
        return r;
    };
    if (method == "bt" || method == "flbt" || method == "tlbt" || method == "brbt")
    {
        return tail_sum([](double s) { return 2.0 * s; });
    }
    if (method == "lqgbt")
    {
        return tail_sum([](double s) { return 2.0 * s / std::sqrt(1.0 + s * s); });
    }
    if (method == "hna")
    {
        return tail_sum([](double s) { return s; });
    }
    if (method == "bst")
    {
        double prod = 1.0;
        Index r = n;
        for (Index i = n - 1; i >= 0; --i)
        {
            const double s = hsv(i);
            prod *= s < 1.0 ? (1.0 + s) / (1.0 - s) : std::numeric_limits<double>::infinity();
            if (prod - 1.0 > tol)
            {
                break;
            }
            r = i;
        }
        return r;
    }
    Index r = 0;
    while (r < n && hsv(r) > tol * hsv(0))
    {
        ++r;
    }
    return r;
}

Truncation square_root_truncate(const System& sys, const GramianFactors& factors, const OptionTree& user)
{
    const OptionTree opts = resolve_options("reduce", user);
    const Gen g = generalized(sys);
    if (factors.r.rows() != g.a.rows() || factors.l.rows() != g.a.rows())
    {
        throw Error(ErrorKind::DimensionMismatch, "Gramian factors do not match the system order");
    }
    check_request(opts);
    const Svd s = svd(factors.l.transpose() * g.e * factors.r);
    const Vector& hsv = s.sigma;
    const Index rank = numerical_rank(hsv, 1e-13);
    const long order = opts.integer("order");
    Index r = 0;
    if (order >= 0)
    {
        r = static_cast<Index>(order);
        if (r > rank)
        {
            throw Error(ErrorKind::OrderTooLarge, "requested order " + std::to_string(r) +
                                                      " exceeds the numerical rank " + std::to_string(rank));
        }
    }
    else
    {
        r = std::min(rank, order_from_tolerance(hsv, opts.text("method"), opts.number("tol")));
    }
    return truncate_with(g, factors, r, opts.text("flavor"), hsv, s);
}

System mirror(const System& sys)
{
    if (time_domain(sys) != TimeDomain::Continuous)
    {
        throw Error(ErrorKind::InvalidArgument, "mirror is defined for continuous-time systems");
    }
    if (const auto* s = std::get_if<StandardSystem>(&sys))
    {
        return StandardSystem{-s->a, s->b, -s->c, s->d, s->time};
    }
    if (const auto* s = std::get_if<DescriptorSystem>(&sys))
    {
        return DescriptorSystem{s->e, -s->a, s->b, -s->c, s->d, s->time};
    }
    throw Error(ErrorKind::InvalidArgument, "mirror applies to first-order systems");
}

ReductionResult reduce(const System& sys, const OptionTree& user)
{
    const OptionTree opts = resolve_options("reduce", user);
    const std::string method = opts.text("method");
    if (std::find(reduction_methods().begin(), reduction_methods().end(), method) == reduction_methods().end())
    {
        throw Error(ErrorKind::InvalidArgument, "unknown reduction method '" + method + "'");
    }
    if (std::holds_alternative<SecondOrderSystem>(sys))
    {
        throw Error(ErrorKind::InvalidArgument, "second-order systems are reduced by so_reduce");
    }
    const ValidationReport rep = validate(sys);
    if (!rep.ok())
    {
        throw Error(ErrorKind::DimensionMismatch, "invalid system: " + rep.issues.front());
    }
    if (method == "mt")
    {
        return modal_truncate(sys, user);
    }
    if (time_domain(sys) == TimeDomain::Discrete && continuous_only(method))
    {
        throw Error(ErrorKind::InvalidArgument, "method '" + method + "' supports continuous-time systems only");
    }
    check_request(opts);

    ReductionResult out;
    out.info.set("method", method).set("class", class_name(sys)).set("n", order(sys));
    const OptionTree dopts = opts.child("decompose");

    if (method == "lqgbt" || method == "hinfbt")
    {
        System finite = sys;
        std::optional<DescriptorSystem> infinite;
        const auto* ds = std::get_if<DescriptorSystem>(&sys);
        if (ds && !e_invertible(ds->e))
        {
            const SubsystemDecomposition dec = decompose_descriptor(*ds, dopts);
            std::vector<System> parts{dec.stable};
            if (dec.antistable)
            {
                parts.push_back(*dec.antistable);
            }
            finite = couple(parts);
            infinite = dec.infinite;
            out.info.set("ninf", dec.ninf);
        }
        const GramianFactors f = gramian_pair(finite, method, opts.child("gramian"));
        const Truncation tr = square_root_truncate(finite, f, opts);
        InfoTree fi;
        fi.set("hsv", to_json(tr.hsv)).set("order", tr.order);
        fi.set_child("gramian", f.info);
        out.info.set_child("finite", fi);
        std::vector<System> parts{tr.rom};
        if (infinite)
        {
            parts.push_back(*infinite);
        }
        out.rom = couple(parts);
        out.info.set("order", order(out.rom));
        return out;
    }

    const SubsystemDecomposition dec = decompose(sys, dopts);
    out.info.set("ns", dec.ns).set("nu", dec.nu).set("ninf", dec.ninf);
    out.info.set_child("decomposition", dec.transform_info);

    InfoTree si;
    std::vector<System> parts{reduce_stable_part(dec.stable, method, opts, si)};
    out.info.set_child("stable", si);
    if (dec.antistable)
    {
        const std::string policy = opts.text("antistable");
        if (policy == "keep")
        {
            parts.push_back(*dec.antistable);
        }
        else if (policy == "mirror")
        {
            InfoTree ai;
            parts.push_back(reduce_mirrored(*dec.antistable, opts, ai));
            out.info.set_child("antistable", ai);
        }
        else
        {
            throw Error(ErrorKind::InvalidArgument, "antistable policy must be 'keep' or 'mirror'");
        }
    }
    if (dec.infinite)
    {
        parts.push_back(*dec.infinite);
    }
    out.rom = couple(parts);
    out.info.set("order", order(out.rom));
    return out;
}

ReductionResult modal_truncate(const System& sys, const OptionTree& user)
{
    const OptionTree opts = resolve_options("reduce", user);
    const Gen g = generalized(sys);
    const std::string kind = opts.text("region_kind");
    const double tau = opts.number("region_shift");
    const double rho = opts.number("region_radius");
    const bool disk = kind == "inside_disk" || kind == "outside_disk";
    if (!disk && kind != "right_of" && kind != "left_of")
    {
        throw Error(ErrorKind::InvalidArgument, "region_kind must be right_of, left_of, inside_disk or outside_disk");
    }
    if (disk && !(rho > 0.0))
    {
        throw Error(ErrorKind::InvalidArgument, "region_radius must be positive");
    }
    const double scale = disk ? rho : 1.0;
    const Matrix shifted = (g.a - tau * g.e) / scale;
    const TimeDomain split_time = disk ? TimeDomain::Discrete : TimeDomain::Continuous;
    System target;
    if (g.standard)
    {
        target = StandardSystem{shifted, g.b, g.c, g.d, split_time};
    }
    else
    {
        target = DescriptorSystem{g.e, shifted, g.b, g.c, g.d, split_time};
    }
    SubsystemDecomposition dec;
    try
    {
        dec = decompose(target, opts.child("decompose"));
    }
    catch (const Error& err)
    {
        if (err.kind() == ErrorKind::AxisEigenvalue)
        {
            throw Error(ErrorKind::RegionBoundaryEigenvalue, std::string("eigenvalue on the region boundary (") +
                                                                 err.what() + ")");
        }
        throw;
    }
    const bool keep_antistable = kind == "right_of" || kind == "outside_disk";
    std::optional<System> kept;
    if (keep_antistable)
    {
        if (dec.antistable)
        {
            kept = with_d(*dec.antistable, g.d);
        }
    }
    else if (dec.ns > 0)
    {
        kept = dec.stable;
    }
    const Index kept_order = kept ? order(*kept) : 0;
    if (kept_order == 0 && !opts.flag("allow_empty"))
    {
        throw Error(ErrorKind::EmptySelection, "no eigenvalue inside the selected region");
    }
    std::vector<System> parts;
    if (kept)
    {
        System k = *kept;
        std::visit(
            [&](auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, StandardSystem>)
                {
                    x.a = scale * x.a + tau * Matrix::Identity(x.a.rows(), x.a.rows());
                }
                else if constexpr (std::is_same_v<T, DescriptorSystem>)
                {
                    x.a = scale * x.a + tau * x.e;
                }
            },
            k);
        parts.push_back(with_time(k, g.time));
    }
    else
    {
        parts.push_back(g.standard ? System(StandardSystem{Matrix::Zero(0, 0), Matrix::Zero(0, g.b.cols()),
                                                           Matrix::Zero(g.c.rows(), 0), g.d, g.time})
                                   : System(DescriptorSystem{Matrix::Zero(0, 0), Matrix::Zero(0, 0),
                                                             Matrix::Zero(0, g.b.cols()), Matrix::Zero(g.c.rows(), 0),
                                                             g.d, g.time}));
    }
    if (dec.infinite)
    {
        parts.push_back(with_time(*dec.infinite, g.time));
    }
    ReductionResult out;
    out.rom = couple(parts);
    out.info.set("method", "mt").set("region_kind", kind).set("region_shift", tau);
    if (disk)
    {
        out.info.set("region_radius", rho);
    }
    out.info.set("kept", kept_order).set("ninf", dec.ninf).set("order", order(out.rom));
    return out;
}

ReductionResult hankel_norm_approx(const System& sys, const OptionTree& user)
{
    OptionTree req = user;
    req.set("method", "hna");
    return reduce(sys, req);
}

Vector hankel_singular_values(const System& sys, const OptionTree& gramian_opts)
{
    const Gen g = generalized(sys);
    if (g.a.rows() == 0)
    {
        return Vector(0);
    }
    const GramianFactors f = gramian_pair(sys, "bt", gramian_opts);
    return svd(f.l.transpose() * g.e * f.r).sigma;
}

double hankel_norm(const System& sys, const OptionTree& gramian_opts)
{
    const Vector s = hankel_singular_values(sys, gramian_opts);
    return s.size() ? s(0) : 0.0;
}

} // namespace specmor
