#include <specmor/error.hpp>
#include <specmor/mor_so.hpp>
#include <specmor/spectral.hpp>

#include <algorithm>
#include <atomic>

namespace specmor
{

namespace
{

std::atomic<long> g_block_computations{0};

Json to_json(const Vector& v)
{
    return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

struct Pair
{
    Matrix y; // left factor block
    Matrix x; // right factor block
};

Pair formula_pair(const SoGramianBlocks& b, const Matrix& m, const std::string& f)
{
    if (f == "p")
    {
        return {b.lp, b.rp};
    }
    if (f == "pm")
    {
        return {b.lp, m * b.rp};
    }
    if (f == "v")
    {
        return {b.lvm, b.rv};
    }
    if (f == "fv")
    {
        return {b.lv, b.rv};
    }
    if (f == "pv")
    {
        return {b.lvm, b.rp};
    }
    if (f == "vp")
    {
        return {b.lp, b.rv};
    }
    if (f == "vpm")
    {
        return {b.lp, m * b.rv};
    }
    throw Error(ErrorKind::FormulaUnknown, "unknown second-order balancing formula '" + f + "'");
}

struct Bases
{
    Matrix w, t;
    Vector hsv;
};

// Bases of one SVD(Y^T X) = U S V^T at order r; `right` is the unweighted
// right factor used to build T (X may carry a mass-matrix weight).
Bases bases_for(const Matrix& y, const Matrix& x, const Matrix& right, Index r, bool need_order_check)
{
    const Svd s = svd(y.transpose() * x);
    Bases out;
    out.hsv = s.sigma;
    const Index rank = numerical_rank(s.sigma, 1e-13);
    if (need_order_check && r > rank)
    {
        throw Error(ErrorKind::OrderTooLarge, "requested order " + std::to_string(r) + " exceeds the numerical rank " +
                                                  std::to_string(rank));
    }
    const Vector isq = s.sigma.head(r).cwiseSqrt().cwiseInverse();
    out.t = right * s.v.leftCols(r) * isq.asDiagonal();
    out.w = y * s.u.leftCols(r) * isq.asDiagonal();
    return out;
}

Index pick_order(const Vector& hsv, const OptionTree& opts)
{
    const long order = opts.integer("order");
    const double tol = opts.number("tol");
    if ((order >= 0) == (tol > 0.0))
    {
        throw Error(ErrorKind::InvalidArgument, "set exactly one of 'order' and 'tol'");
    }
    if (order >= 0)
    {
        return static_cast<Index>(order);
    }
    const Index rank = numerical_rank(hsv, 1e-13);
    Index r = 0;
    while (r < rank && hsv(r) > tol * hsv(0))
    {
        ++r;
    }
    return r;
}

OptionTree gramian_options(const OptionTree& opts)
{
    OptionTree g;
    g.set("lyapunov", opts.child("lyapunov").json())
        .set("sign", opts.child("sign").json())
        .set("freq_lo", opts.number("freq_lo"))
        .set("freq_hi", opts.number("freq_hi"))
        .set("time_final", opts.number("time_final"))
        .set("modified", opts.flag("modified"));
    return g;
}

SoGramianBlocks blocks_from(const SecondOrderSystem& so, const GramianFactors& f, const std::string& kind)
{
    const Index n = so.order();
    SoGramianBlocks out;
    out.rp = f.r.topRows(n);
    out.rv = f.r.bottomRows(n);
    out.lp = f.l.topRows(n);
    out.lv = f.l.bottomRows(n);
    out.lvm = so.m.transpose() * out.lv;
    out.kind = kind;
    out.info = f.info;
    return out;
}

} // namespace

const std::vector<std::string>& so_formulas()
{
    static const std::vector<std::string> names{"p", "pm", "pv", "vp", "vpm", "v", "fv", "so"};
    return names;
}

long so_gramian_computations()
{
    return g_block_computations.load();
}

SoGramianBlocks so_gramian_blocks(const SecondOrderSystem& so, const OptionTree& user)
{
    const OptionTree opts = resolve_options("so_reduce", user);
    const ValidationReport rep = validate(so);
    if (!rep.ok())
    {
        throw Error(ErrorKind::DimensionMismatch, "invalid system: " + rep.issues.front());
    }
    ++g_block_computations;
    const DescriptorSystem fo = first_order_realization(so);
    const std::string limited = opts.text("limited");
    if (limited == "none")
    {
        GramianFactors f;
        f.method = "bt";
        InfoTree ic;
        InfoTree io;
        f.r = solve_lyapunov(fo.a, fo.e, fo.b, GramianSide::Controllability, TimeDomain::Continuous,
                             opts.child("lyapunov"), &ic);
        f.l = solve_lyapunov(fo.a, fo.e, fo.c, GramianSide::Observability, TimeDomain::Continuous,
                             opts.child("lyapunov"), &io);
        f.info.set_child("controllability", ic);
        f.info.set_child("observability", io);
        return blocks_from(so, f, "bt");
    }
    LimitedMode mode;
    if (limited == "frequency")
    {
        mode = {LimitedMode::Kind::Frequency, opts.number("freq_lo"), opts.number("freq_hi")};
    }
    else if (limited == "time")
    {
        mode = {LimitedMode::Kind::Time, 0.0, opts.number("time_final")};
    }
    else
    {
        throw Error(ErrorKind::InvalidArgument, "limited must be 'none', 'frequency' or 'time'");
    }
    const GramianFactors f = limited_gramians(fo, mode, gramian_options(opts));
    return blocks_from(so, f, f.method);
}

SoReduction so_balanced_truncate(const SecondOrderSystem& so, const SoGramianBlocks& blocks,
                                 const std::string& formula, const OptionTree& user)
{
    const OptionTree opts = resolve_options("so_reduce", user);
    const Index n = so.order();
    if (blocks.rp.rows() != n || blocks.lp.rows() != n)
    {
        throw Error(ErrorKind::DimensionMismatch, "Gramian blocks do not match the system order");
    }
    SoReduction out;
    Matrix w;
    Matrix t;
    if (formula == "so")
    {
        const Vector hp = svd(blocks.lp.transpose() * blocks.rp).sigma;
        const Vector hv = svd(blocks.lvm.transpose() * blocks.rv).sigma;
        const Index r = pick_order(hp, opts);
        const Bases bp = bases_for(blocks.lp, blocks.rp, blocks.rp, r, true);
        const Bases bv = bases_for(blocks.lvm, blocks.rv, blocks.rv, std::min(r, hv.size()), true);
        if (bv.w.cols() != r)
        {
            throw Error(ErrorKind::OrderTooLarge, "velocity block rank below the requested order");
        }
        out.hsv = hp;
        t = bp.t;
        w = bv.w;
        out.info.set("hsv_velocity", to_json(hv));
    }
    else
    {
        const Pair pr = formula_pair(blocks, so.m, formula);
        const Vector h = svd(pr.y.transpose() * pr.x).sigma;
        const Index r = pick_order(h, opts);
        const Matrix right = (formula == "pm") ? blocks.rp : (formula == "vpm") ? blocks.rv : pr.x;
        const Bases b = bases_for(pr.y, pr.x, right, r, true);
        out.hsv = b.hsv;
        t = b.t;
        w = b.w;
    }
    if (opts.flag("one_sided"))
    {
        t = orth(t, 0.0);
        w = t;
    }
    const Matrix wt = w.transpose();
    out.rom = SecondOrderSystem{wt * so.m * t,  wt * so.e * t,  wt * so.k * t, wt * so.bu,
                                so.cp * t,      so.cv * t,      so.d};
    out.w = w;
    out.t = t;
    const DescriptorSystem fo = first_order_realization(out.rom);
    out.info.set("formula", formula).set("order", out.rom.order()).set("hsv", to_json(out.hsv));
    out.info.set("stable", fo.order() == 0 || is_hurwitz(fo.a, fo.e));
    out.info.set("one_sided", opts.flag("one_sided")).set("gramians", blocks.kind);
    return out;
}

SoReduction so_reduce(const SecondOrderSystem& so, const OptionTree& user)
{
    const OptionTree opts = resolve_options("so_reduce", user);
    const std::string formula = opts.text("formula");
    if (std::find(so_formulas().begin(), so_formulas().end(), formula) == so_formulas().end())
    {
        throw Error(ErrorKind::FormulaUnknown, "unknown second-order balancing formula '" + formula + "'");
    }
    return so_balanced_truncate(so, so_gramian_blocks(so, opts), formula, opts);
}

SoReduction so_limited_truncate(const SecondOrderSystem& so, const std::string& formula, const LimitedMode& mode,
                                const OptionTree& user)
{
    OptionTree opts = resolve_options("so_reduce", user);
    if (mode.kind == LimitedMode::Kind::Frequency)
    {
        opts.set("limited", "frequency").set("freq_lo", mode.lo).set("freq_hi", mode.hi);
    }
    else
    {
        opts.set("limited", "time").set("time_final", mode.hi);
    }
    return so_balanced_truncate(so, so_gramian_blocks(so, opts), formula, opts);
}

std::vector<SoReduction> so_reduce_all(const SecondOrderSystem& so, const OptionTree& user)
{
    const OptionTree opts = resolve_options("so_reduce", user);
    const SoGramianBlocks blocks = so_gramian_blocks(so, opts);
    std::vector<SoReduction> out;
    for (const auto& f : so_formulas())
    {
        out.push_back(so_balanced_truncate(so, blocks, f, opts));
    }
    return out;
}

} // namespace specmor
