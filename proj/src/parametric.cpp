#include <specmor/decomposition.hpp>
#include <specmor/dense.hpp>
#include <specmor/error.hpp>
#include <specmor/io.hpp>
#include <specmor/mor.hpp>
#include <specmor/parametric.hpp>

#include <cmath>
#include <numbers>

namespace specmor
{

namespace fs = std::filesystem;

namespace
{

const std::string affine_prefix = "affine:";

struct AffineCoefficients
{
    double c0 = 0.0;
    double c1 = 0.0;
};

AffineCoefficients parse_theta(const std::string& tag)
{
    const std::string sep = "+mu*";
    const auto pos = tag.find(sep);
    if (tag.rfind(affine_prefix, 0) != 0 || pos == std::string::npos)
    {
        throw Error(ErrorKind::Format, "coefficient tag '" + tag + "' is not of the form affine:<c0>+mu*<c1>");
    }
    AffineCoefficients out;
    try
    {
        std::size_t used0 = 0;
        std::size_t used1 = 0;
        const std::string s0 = tag.substr(affine_prefix.size(), pos - affine_prefix.size());
        const std::string s1 = tag.substr(pos + sep.size());
        out.c0 = std::stod(s0, &used0);
        out.c1 = std::stod(s1, &used1);
        if (used0 != s0.size() || used1 != s1.size())
        {
            throw std::invalid_argument(tag);
        }
    }
    catch (const std::logic_error&)
    {
        throw Error(ErrorKind::Format, "coefficient tag '" + tag + "' has unreadable numbers");
    }
    return out;
}

double log_axis(double mu)
{
    if (!(mu > 0.0))
    {
        throw Error(ErrorKind::MuOutOfDomain, "parameter must be positive for the logarithmic axis");
    }
    return std::log10(mu);
}

Vector lagrange_weights(const Vector& x, double t)
{
    const Index k = x.size();
    Vector w = Vector::Ones(k);
    for (Index j = 0; j < k; ++j)
    {
        for (Index i = 0; i < k; ++i)
        {
            if (i != j)
            {
                w(j) /= x(j) - x(i);
            }
        }
    }
    Vector out = Vector::Zero(k);
    for (Index j = 0; j < k; ++j)
    {
        if (t == x(j))
        {
            out(j) = 1.0;
            return out;
        }
    }
    for (Index j = 0; j < k; ++j)
    {
        out(j) = w(j) / (t - x(j));
    }
    return out / out.sum();
}

Vector hat_weights(const Vector& x, double t)
{
    const Index k = x.size();
    Vector out = Vector::Zero(k);
    Index j = 0;
    while (j + 2 < k && t > x(j + 1))
    {
        ++j;
    }
    const double lam = (t - x(j)) / (x(j + 1) - x(j));
    out(j) = 1.0 - lam;
    out(j + 1) = lam;
    return out;
}

// Cox-de Boor basis of degree p on the knot vector tau at t in [tau_p, tau_last].
Vector bspline_basis(const std::vector<double>& tau, int p, double t)
{
    const Index count = static_cast<Index>(tau.size()) - p - 1;
    const Index spans = static_cast<Index>(tau.size()) - 1;
    Vector n = Vector::Zero(spans);
    Index span = p;
    while (span + 1 < count && t >= tau[static_cast<std::size_t>(span + 1)])
    {
        ++span;
    }
    n(span) = 1.0;
    for (int d = 1; d <= p; ++d)
    {
        Vector next = Vector::Zero(spans);
        for (Index i = 0; i + d < spans; ++i)
        {
            const auto ui = static_cast<std::size_t>(i);
            double v = 0.0;
            const double l = tau[ui + static_cast<std::size_t>(d)] - tau[ui];
            if (l > 0.0)
            {
                v += (t - tau[ui]) / l * n(i);
            }
            const double r = tau[ui + static_cast<std::size_t>(d) + 1] - tau[ui + 1];
            if (r > 0.0)
            {
                v += (tau[ui + static_cast<std::size_t>(d) + 1] - t) / r * n(i + 1);
            }
            next(i) = v;
        }
        n = next;
    }
    return n.head(count);
}

std::vector<double> vardim_knot_vector(const Vector& x)
{
    const Index k = x.size();
    std::vector<double> tau(3, x(0));
    for (Index j = 1; j + 2 < k; ++j)
    {
        tau.push_back(0.5 * (x(j) + x(j + 1)));
    }
    tau.insert(tau.end(), 3, x(k - 1));
    return tau;
}

Matrix scaled_output(const System& sys, double w, Matrix* d)
{
    if (const auto* s = std::get_if<StandardSystem>(&sys))
    {
        *d = w * s->d;
        return w * s->c;
    }
    const auto& ds = std::get<DescriptorSystem>(sys);
    *d = w * ds.d;
    return w * ds.c;
}

Matrix column_basis(const Matrix& z, double tol, Index limit)
{
    const Svd s = svd(z);
    const Index r = std::min(numerical_rank(s.sigma, tol), limit);
    return s.u.leftCols(r);
}

} // namespace

double theta_value(const std::string& tag, double mu)
{
    const AffineCoefficients c = parse_theta(tag);
    return c.c0 + c.c1 * mu;
}

std::string affine_tag(double c0, double c1)
{
    return affine_prefix + format_double(c0) + "+mu*" + format_double(c1);
}

void validate_param(const AffineParamSystem& sys)
{
    const Index n = sys.order();
    if (sys.terms.empty())
    {
        throw Error(ErrorKind::InvalidArgument, "parametric system needs at least one A term");
    }
    for (const auto& t : sys.terms)
    {
        parse_theta(t.theta);
        if (t.a.rows() != n || t.a.cols() != n)
        {
            throw Error(ErrorKind::DimensionMismatch, "A term '" + t.theta + "' does not match the state dimension");
        }
    }
    if (sys.e.size() != 0 && (sys.e.rows() != n || sys.e.cols() != n))
    {
        throw Error(ErrorKind::DimensionMismatch, "E does not match the state dimension");
    }
    if (sys.c.cols() != n || sys.d.rows() != sys.c.rows() || sys.d.cols() != sys.b.cols())
    {
        throw Error(ErrorKind::DimensionMismatch, "B, C, D dimensions are inconsistent");
    }
    if (!(sys.mu_lo < sys.mu_hi))
    {
        throw Error(ErrorKind::IntervalInvalid, "parameter domain needs mu_lo < mu_hi");
    }
}

System materialize(const AffineParamSystem& sys, double mu)
{
    Matrix a = Matrix::Zero(sys.order(), sys.order());
    for (const auto& t : sys.terms)
    {
        a += theta_value(t.theta, mu) * t.a;
    }
    if (sys.e.size() == 0)
    {
        return StandardSystem{a, sys.b, sys.c, sys.d, sys.time};
    }
    return DescriptorSystem{sys.e, a, sys.b, sys.c, sys.d, sys.time};
}

AffineParamSystem load_param_system(const fs::path& manifest)
{
    const Json j = read_json_file(manifest);
    if (!j.is_object() || !j.contains("a_terms") || !j.at("a_terms").is_array())
    {
        throw Error(ErrorKind::Format, manifest.string() + ": parametric manifest needs an array field 'a_terms'");
    }
    if (!j.contains("mu_domain") || !j.at("mu_domain").is_array() || j.at("mu_domain").size() != 2)
    {
        throw Error(ErrorKind::Format, manifest.string() + ": parametric manifest needs 'mu_domain': [lo, hi]");
    }
    const std::string cls = j.value("class", "");
    if (cls != "ct_ss" && cls != "ct_dss")
    {
        throw Error(ErrorKind::Format, manifest.string() + ": parametric class must be ct_ss or ct_dss");
    }
    const fs::path base = manifest.has_parent_path() ? manifest.parent_path() : fs::path(".");
    const Json& files = j.value("matrices", Json::object());
    auto load = [&](const char* key) -> Matrix {
        if (!files.contains(key))
        {
            return Matrix();
        }
        return read_matrix_market(base / files.at(key).get<std::string>());
    };
    AffineParamSystem sys;
    sys.e = cls == "ct_dss" ? load("E") : Matrix();
    if (cls == "ct_dss" && sys.e.size() == 0)
    {
        throw Error(ErrorKind::Format, manifest.string() + ": E required for ct_dss");
    }
    sys.b = load("B");
    sys.c = load("C");
    if (sys.b.size() == 0 || sys.c.size() == 0)
    {
        throw Error(ErrorKind::Format, manifest.string() + ": matrices B and C are required");
    }
    sys.d = load("D");
    if (sys.d.size() == 0)
    {
        sys.d = Matrix::Zero(sys.c.rows(), sys.b.cols());
    }
    for (const auto& term : j.at("a_terms"))
    {
        if (!term.is_object() || !term.contains("theta") || !term.contains("file"))
        {
            throw Error(ErrorKind::Format, manifest.string() + ": every a_terms entry needs 'theta' and 'file'");
        }
        sys.terms.push_back({term.at("theta").get<std::string>(),
                             read_matrix_market(base / term.at("file").get<std::string>())});
    }
    sys.mu_lo = j.at("mu_domain").at(0).get<double>();
    sys.mu_hi = j.at("mu_domain").at(1).get<double>();
    validate_param(sys);
    return sys;
}

fs::path save_param_system(const AffineParamSystem& sys, const fs::path& dir, const std::string& stem)
{
    validate_param(sys);
    fs::create_directories(dir);
    Json files = Json::object();
    auto put = [&](const std::string& key, const Matrix& m) {
        const std::string name = stem + "_" + key + ".mtx";
        write_matrix_market(dir / name, m);
        files[key] = name;
    };
    if (sys.e.size() != 0)
    {
        put("E", sys.e);
    }
    put("B", sys.b);
    put("C", sys.c);
    put("D", sys.d);
    Json terms = Json::array();
    for (std::size_t i = 0; i < sys.terms.size(); ++i)
    {
        const std::string name = stem + "_A" + std::to_string(i) + ".mtx";
        write_matrix_market(dir / name, sys.terms[i].a);
        terms.push_back({{"theta", sys.terms[i].theta}, {"file", name}});
    }
    Json j{{"class", sys.e.size() != 0 ? "ct_dss" : "ct_ss"},
           {"n", sys.order()},
           {"m", sys.b.cols()},
           {"p", sys.c.rows()},
           {"matrices", files},
           {"a_terms", terms},
           {"mu_domain", {sys.mu_lo, sys.mu_hi}}};
    const fs::path out = dir / (stem + ".json");
    write_text_file(out, j.dump(2) + "\n");
    return out;
}

Vector sample_parameters(double log_lo, double log_hi, Index k)
{
    if (k < 1)
    {
        throw Error(ErrorKind::InvalidArgument, "need at least one parameter sample");
    }
    if (!(log_lo < log_hi))
    {
        throw Error(ErrorKind::IntervalInvalid, "log-parameter interval needs lo < hi");
    }
    const double mid = 0.5 * (log_lo + log_hi);
    const double half = 0.5 * (log_hi - log_lo);
    Vector out(k);
    for (Index j = 0; j < k; ++j)
    {
        // ascending order: largest index root first
        const double angle = static_cast<double>(2 * (k - j) - 1) * std::numbers::pi / static_cast<double>(2 * k);
        out(j) = std::pow(10.0, mid + half * std::cos(angle));
    }
    return out;
}

std::vector<LocalRom> local_roms(const AffineParamSystem& sys, const Vector& knots, const OptionTree& reduce_opts)
{
    validate_param(sys);
    const OptionTree opts = resolve_options("reduce", reduce_opts);
    const std::string method = opts.text("method");
    if (method == "mt" || method == "hna")
    {
        throw Error(ErrorKind::InvalidArgument, "parametric reduction needs a projection method, got '" + method + "'");
    }
    std::vector<LocalRom> out;
    for (Index j = 0; j < knots.size(); ++j)
    {
        const double mu = knots(j);
        try
        {
            const System s = materialize(sys, mu);
            const GramianFactors f = gramian_pair(s, method, opts.child("gramian"));
            const Truncation t = square_root_truncate(s, f, opts);
            out.push_back({mu, t.rom, t.w, t.t, t.hsv});
        }
        catch (const Error& e)
        {
            const std::string what = e.what();
            throw Error(e.kind(), "at mu = " + format_double(mu) + ": " + what.substr(e.name().size() + 2));
        }
    }
    return out;
}

BasisKind parse_basis_kind(const std::string& name)
{
    if (name == "lagrange")
    {
        return BasisKind::Lagrange;
    }
    if (name == "bspline-linear")
    {
        return BasisKind::SplineLinear;
    }
    if (name == "bspline-vardim")
    {
        return BasisKind::SplineVarDim;
    }
    throw Error(ErrorKind::InvalidArgument,
                "unknown interpolation kind '" + name + "' (lagrange, bspline-linear, bspline-vardim)");
}

std::string basis_kind_name(BasisKind kind)
{
    switch (kind)
    {
    case BasisKind::Lagrange:
        return "lagrange";
    case BasisKind::SplineLinear:
        return "bspline-linear";
    case BasisKind::SplineVarDim:
        return "bspline-vardim";
    }
    return "lagrange";
}

InterpolatoryRom interp_rom(const Vector& knots, const std::vector<System>& roms, BasisKind kind)
{
    const Index k = knots.size();
    if (k < 1 || static_cast<Index>(roms.size()) != k)
    {
        throw Error(ErrorKind::InvalidArgument, "need one local rom per knot and at least one knot");
    }
    const Index need = kind == BasisKind::Lagrange ? 1 : kind == BasisKind::SplineLinear ? 2 : 3;
    if (k < need)
    {
        throw Error(ErrorKind::InvalidArgument,
                    basis_kind_name(kind) + " needs at least " + std::to_string(need) + " knots");
    }
    for (Index j = 0; j < k; ++j)
    {
        if (!(knots(j) > 0.0) || (j > 0 && !(knots(j) > knots(j - 1))))
        {
            throw Error(ErrorKind::InvalidArgument, "knots must be positive and strictly increasing");
        }
        if (std::holds_alternative<SecondOrderSystem>(roms[static_cast<std::size_t>(j)]))
        {
            throw Error(ErrorKind::InvalidArgument, "local roms must be first-order systems");
        }
        if (inputs(roms[static_cast<std::size_t>(j)]) != inputs(roms.front()) ||
            outputs(roms[static_cast<std::size_t>(j)]) != outputs(roms.front()))
        {
            throw Error(ErrorKind::DimensionMismatch, "local roms must share inputs and outputs");
        }
    }
    return {knots, roms, kind};
}

InterpolatoryRom interp_rom(const std::vector<LocalRom>& locals, BasisKind kind)
{
    Vector knots(static_cast<Index>(locals.size()));
    std::vector<System> roms;
    for (std::size_t j = 0; j < locals.size(); ++j)
    {
        knots(static_cast<Index>(j)) = locals[j].mu;
        roms.push_back(locals[j].rom);
    }
    return interp_rom(knots, roms, kind);
}

Vector basis_weights(const InterpolatoryRom& ir, double mu, bool strict, InfoTree* info)
{
    const Vector x = ir.knots.unaryExpr([](double v) { return std::log10(v); });
    double t = log_axis(mu);
    if (ir.kind == BasisKind::Lagrange)
    {
        return lagrange_weights(x, t);
    }
    const double lo = x(0);
    const double hi = x(x.size() - 1);
    if (t < lo || t > hi)
    {
        if (strict)
        {
            throw Error(ErrorKind::MuOutOfDomain,
                        "mu = " + format_double(mu) + " lies outside the spline knot range [" +
                            format_double(ir.knots(0)) + ", " + format_double(ir.knots(ir.knots.size() - 1)) + "]");
        }
        t = std::clamp(t, lo, hi);
        if (info != nullptr)
        {
            info->set("clamped", true).set("warning", "mu clamped to the knot range");
        }
    }
    if (ir.kind == BasisKind::SplineLinear)
    {
        return hat_weights(x, t);
    }
    return bspline_basis(vardim_knot_vector(x), 2, t);
}

ComplexMatrix eval_interp(const InterpolatoryRom& ir, Complex s, double mu, bool strict, InfoTree* info)
{
    const Vector w = basis_weights(ir, mu, strict, info);
    ComplexMatrix out = ComplexMatrix::Zero(outputs(ir.roms.front()), inputs(ir.roms.front()));
    for (Index j = 0; j < w.size(); ++j)
    {
        if (w(j) != 0.0)
        {
            out += w(j) * transfer_eval(ir.roms[static_cast<std::size_t>(j)], s);
        }
    }
    return out;
}

System realize_interp(const InterpolatoryRom& ir, double mu, bool strict)
{
    const Vector w = basis_weights(ir, mu, strict);
    std::vector<System> parts;
    for (Index j = 0; j < w.size(); ++j)
    {
        System part = ir.roms[static_cast<std::size_t>(j)];
        Matrix d;
        const Matrix c = scaled_output(part, w(j), &d);
        std::visit(
            [&](auto& sys) {
                if constexpr (!std::is_same_v<std::decay_t<decltype(sys)>, SecondOrderSystem>)
                {
                    sys.c = c;
                    sys.d = d;
                }
            },
            part);
        parts.push_back(std::move(part));
    }
    return couple(parts);
}

System project(const System& sys, const Matrix& w, const Matrix& t)
{
    if (const auto* s = std::get_if<StandardSystem>(&sys))
    {
        return DescriptorSystem{w.transpose() * t, w.transpose() * s->a * t, w.transpose() * s->b, s->c * t, s->d,
                                s->time};
    }
    if (const auto* ds = std::get_if<DescriptorSystem>(&sys))
    {
        return DescriptorSystem{w.transpose() * ds->e * t, w.transpose() * ds->a * t, w.transpose() * ds->b,
                                ds->c * t, ds->d, ds->time};
    }
    throw Error(ErrorKind::InvalidArgument, "projection of second-order systems is handled by the second-order module");
}

PiecewiseRom piecewise_rom(const AffineParamSystem& sys, const std::vector<LocalRom>& locals, bool one_sided,
                           double tol)
{
    validate_param(sys);
    if (locals.empty())
    {
        throw Error(ErrorKind::InvalidArgument, "no local bases to combine");
    }
    const Index n = sys.order();
    Index cols = 0;
    for (const auto& l : locals)
    {
        if (l.w.rows() != n || l.t.rows() != n || l.w.cols() != l.t.cols())
        {
            throw Error(ErrorKind::DimensionMismatch, "local bases do not match the parametric system");
        }
        cols += l.w.cols();
    }
    Matrix wc(n, cols);
    Matrix tc(n, cols);
    Index off = 0;
    for (const auto& l : locals)
    {
        wc.middleCols(off, l.w.cols()) = l.w;
        tc.middleCols(off, l.t.cols()) = l.t;
        off += l.w.cols();
    }
    PiecewiseRom out;
    out.one_sided = one_sided;
    if (one_sided)
    {
        Matrix both(n, 2 * cols);
        both << wc, tc;
        out.t = cols == 0 ? Matrix(n, 0) : column_basis(both, tol, n);
        out.w = out.t;
    }
    else
    {
        const Svd sw = svd(wc);
        const Svd st = svd(tc);
        const Index r =
            cols == 0 ? 0 : std::min(numerical_rank(sw.sigma, tol), numerical_rank(st.sigma, tol));
        out.w = sw.u.leftCols(r);
        out.t = st.u.leftCols(r);
    }
    if (out.t.cols() == 0)
    {
        throw Error(ErrorKind::CompressionRankZero, "compressed projection basis is empty");
    }
    AffineParamSystem& r = out.system;
    const Matrix wt = out.w.transpose();
    r.e = sys.e.size() == 0 ? Matrix(wt * out.t) : Matrix(wt * sys.e * out.t);
    for (const auto& term : sys.terms)
    {
        r.terms.push_back({term.theta, wt * term.a * out.t});
    }
    r.b = wt * sys.b;
    r.c = sys.c * out.t;
    r.d = sys.d;
    r.mu_lo = sys.mu_lo;
    r.mu_hi = sys.mu_hi;
    r.time = sys.time;
    return out;
}

} // namespace specmor
