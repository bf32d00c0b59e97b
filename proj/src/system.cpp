#include <specmor/error.hpp>
#include <specmor/system.hpp>

#include <cmath>
#include <limits>

namespace specmor
{

std::string class_name(const System& sys)
{
    struct Visitor
    {
        std::string operator()(const StandardSystem& s) const
        {
            return s.time == TimeDomain::Continuous ? "ct_ss" : "dt_ss";
        }
        std::string operator()(const DescriptorSystem& s) const
        {
            return s.time == TimeDomain::Continuous ? "ct_dss" : "dt_dss";
        }
        std::string operator()(const SecondOrderSystem&) const { return "ct_soss"; }
    };
    return std::visit(Visitor{}, sys);
}

Index order(const System& sys)
{
    return std::visit([](const auto& s) { return s.order(); }, sys);
}

Index inputs(const System& sys)
{
    return std::visit([](const auto& s) { return s.inputs(); }, sys);
}

Index outputs(const System& sys)
{
    return std::visit([](const auto& s) { return s.outputs(); }, sys);
}

TimeDomain time_domain(const System& sys)
{
    if (const auto* s = std::get_if<StandardSystem>(&sys))
    {
        return s->time;
    }
    if (const auto* s = std::get_if<DescriptorSystem>(&sys))
    {
        return s->time;
    }
    return TimeDomain::Continuous;
}

DescriptorSystem to_descriptor(const StandardSystem& sys)
{
    return DescriptorSystem{Matrix::Identity(sys.order(), sys.order()), sys.a, sys.b, sys.c, sys.d, sys.time};
}

namespace
{

void check_shape(ValidationReport& rep, const char* name, const Matrix& m, Index rows, Index cols)
{
    if (m.rows() != rows)
    {
        rep.issues.push_back(std::string(name) + " rows: expected " + std::to_string(rows) + ", got " +
                             std::to_string(m.rows()));
    }
    if (m.cols() != cols)
    {
        rep.issues.push_back(std::string(name) + " cols: expected " + std::to_string(cols) + ", got " +
                             std::to_string(m.cols()));
    }
    if (!all_finite(m))
    {
        rep.issues.push_back(std::string(name) + " has non-finite entries");
    }
}

void check_io(ValidationReport& rep, Index m, Index p)
{
    if (m < 1)
    {
        rep.issues.push_back("B cols: at least one input required");
    }
    if (p < 1)
    {
        rep.issues.push_back("C rows: at least one output required");
    }
}

// Regularity of lambda E - A probed at two fixed shifts; the pencil is flagged
// only when both evaluations are numerically singular.
bool pencil_possibly_singular(const Matrix& e, const Matrix& a)
{
    const Index n = a.rows();
    if (n == 0)
    {
        return false;
    }
    const double scale = std::max(e.norm(), a.norm());
    if (scale == 0.0)
    {
        return true;
    }
    const double shifts[] = {0.8346581, -1.9127733};
    for (double lambda : shifts)
    {
        const Matrix pencil = lambda * e - a;
        Eigen::BDCSVD<Matrix> dec(pencil);
        const double smin = dec.singularValues()(n - 1);
        if (smin > static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale * 10.0)
        {
            return false;
        }
    }
    return true;
}

} // namespace

ValidationReport validate(const System& sys)
{
    ValidationReport rep;
    if (const auto* s = std::get_if<StandardSystem>(&sys))
    {
        const Index n = s->a.rows();
        const Index m = s->b.cols();
        const Index p = s->c.rows();
        check_shape(rep, "A", s->a, n, n);
        check_shape(rep, "B", s->b, n, m);
        check_shape(rep, "C", s->c, p, n);
        check_shape(rep, "D", s->d, p, m);
        check_io(rep, m, p);
    }
    else if (const auto* s = std::get_if<DescriptorSystem>(&sys))
    {
        const Index n = s->a.rows();
        const Index m = s->b.cols();
        const Index p = s->c.rows();
        check_shape(rep, "A", s->a, n, n);
        check_shape(rep, "E", s->e, n, n);
        check_shape(rep, "B", s->b, n, m);
        check_shape(rep, "C", s->c, p, n);
        check_shape(rep, "D", s->d, p, m);
        check_io(rep, m, p);
        if (rep.ok() && pencil_possibly_singular(s->e, s->a))
        {
            rep.issues.push_back("pencil possibly singular");
        }
    }
    else
    {
        const auto& so = std::get<SecondOrderSystem>(sys);
        const Index n = so.m.rows();
        const Index m = so.bu.cols();
        const Index p = so.cp.rows();
        check_shape(rep, "M", so.m, n, n);
        check_shape(rep, "E", so.e, n, n);
        check_shape(rep, "K", so.k, n, n);
        check_shape(rep, "Bu", so.bu, n, m);
        check_shape(rep, "Cp", so.cp, p, n);
        check_shape(rep, "Cv", so.cv, p, n);
        check_shape(rep, "D", so.d, p, m);
        check_io(rep, m, p);
    }
    return rep;
}

ComplexMatrix complex_solve(const Matrix& zr, const Matrix& zi, const ComplexMatrix& rhs)
{
    const Index n = zr.rows();
    Matrix big(2 * n, 2 * n);
    big << zr, -zi, zi, zr;
    Matrix brhs(2 * n, rhs.cols());
    brhs << rhs.real(), rhs.imag();
    Matrix x;
    try
    {
        x = lu_solve(big, brhs);
    }
    catch (const Error& err)
    {
        if (err.kind() == ErrorKind::SingularMatrix)
        {
            throw Error(ErrorKind::SingularAtFrequency, "resolvent is singular at the evaluation point");
        }
        throw;
    }
    ComplexMatrix out(n, rhs.cols());
    out.real() = x.topRows(n);
    out.imag() = x.bottomRows(n);
    return out;
}

ComplexMatrix transfer_eval(const DescriptorSystem& sys, Complex s)
{
    const Index n = sys.order();
    if (n == 0)
    {
        return sys.d.cast<Complex>();
    }
    const Matrix zr = s.real() * sys.e - sys.a;
    const Matrix zi = s.imag() * sys.e;
    const ComplexMatrix x = complex_solve(zr, zi, sys.b.cast<Complex>());
    return sys.c.cast<Complex>() * x + sys.d.cast<Complex>();
}

ComplexMatrix transfer_eval(const StandardSystem& sys, Complex s)
{
    const Index n = sys.order();
    if (n == 0)
    {
        return sys.d.cast<Complex>();
    }
    const Matrix eye = Matrix::Identity(n, n);
    const Matrix zr = s.real() * eye - sys.a;
    const Matrix zi = s.imag() * eye;
    const ComplexMatrix x = complex_solve(zr, zi, sys.b.cast<Complex>());
    return sys.c.cast<Complex>() * x + sys.d.cast<Complex>();
}

ComplexMatrix transfer_eval(const SecondOrderSystem& sys, Complex s)
{
    const Index n = sys.order();
    if (n == 0)
    {
        return sys.d.cast<Complex>();
    }
    const Complex s2 = s * s;
    const Matrix zr = s2.real() * sys.m + s.real() * sys.e + sys.k;
    const Matrix zi = s2.imag() * sys.m + s.imag() * sys.e;
    const ComplexMatrix x = complex_solve(zr, zi, sys.bu.cast<Complex>());
    const ComplexMatrix out_map = sys.cp.cast<Complex>() + s * sys.cv.cast<Complex>();
    return out_map * x + sys.d.cast<Complex>();
}

ComplexMatrix transfer_eval(const System& sys, Complex s)
{
    return std::visit([s](const auto& concrete) { return transfer_eval(concrete, s); }, sys);
}

DescriptorSystem first_order_realization(const SecondOrderSystem& so)
{
    const Index n = so.order();
    const Index m = so.inputs();
    const Index p = so.outputs();
    DescriptorSystem out;
    out.time = TimeDomain::Continuous;
    out.e = Matrix::Zero(2 * n, 2 * n);
    out.e.topLeftCorner(n, n).setIdentity();
    out.e.bottomRightCorner(n, n) = so.m;
    out.a = Matrix::Zero(2 * n, 2 * n);
    out.a.topRightCorner(n, n).setIdentity();
    out.a.bottomLeftCorner(n, n) = -so.k;
    out.a.bottomRightCorner(n, n) = -so.e;
    out.b = Matrix::Zero(2 * n, m);
    out.b.bottomRows(n) = so.bu;
    out.c = Matrix(p, 2 * n);
    out.c << so.cp, so.cv;
    out.d = so.d;
    return out;
}

} // namespace specmor
