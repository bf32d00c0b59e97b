#include <specmor/decomposition.hpp>
#include <specmor/dense.hpp>
#include <specmor/error.hpp>
#include <specmor/evaluation.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

namespace specmor
{

namespace
{

const double nan = std::numeric_limits<double>::quiet_NaN();

struct FirstOrder
{
    Matrix e, a, b, c, d;
    TimeDomain time;
};

FirstOrder first_order(const System& sys)
{
    if (const auto* s = std::get_if<StandardSystem>(&sys))
    {
        return {Matrix::Identity(s->order(), s->order()), s->a, s->b, s->c, s->d, s->time};
    }
    if (const auto* d = std::get_if<DescriptorSystem>(&sys))
    {
        return {d->e, d->a, d->b, d->c, d->d, d->time};
    }
    const DescriptorSystem fo = first_order_realization(std::get<SecondOrderSystem>(sys));
    return {fo.e, fo.a, fo.b, fo.c, fo.d, fo.time};
}

bool singular(const Matrix& e)
{
    return e.rows() > 0 && numerical_rank(svd(e).sigma, 1e-12) < e.rows();
}

Eigen::PartialPivLU<Matrix> factor_step(const Matrix& m)
{
    Eigen::PartialPivLU<Matrix> lu(m);
    if (m.rows() > 0 && !(lu.rcond() > std::numeric_limits<double>::epsilon()))
    {
        throw Error(ErrorKind::SolverStepSingular, "time-step matrix is singular");
    }
    return lu;
}

Matrix run_regular(const FirstOrder& s, const Matrix& u, double h)
{
    const Index steps = u.rows() - 1;
    const Index n = s.a.rows();
    Matrix y(u.rows(), s.c.rows());
    Vector x = Vector::Zero(n);
    y.row(0) = (s.c * x + s.d * u.row(0).transpose()).transpose();
    if (s.time == TimeDomain::Discrete)
    {
        const auto lu = factor_step(s.e);
        for (Index k = 0; k < steps; ++k)
        {
            x = lu.solve(s.a * x + s.b * u.row(k).transpose());
            y.row(k + 1) = (s.c * x + s.d * u.row(k + 1).transpose()).transpose();
        }
        return y;
    }
    const auto lu = factor_step(s.e - 0.5 * h * s.a);
    const Matrix rhs = s.e + 0.5 * h * s.a;
    for (Index k = 0; k < steps; ++k)
    {
        const Vector forcing = 0.5 * h * s.b * (u.row(k) + u.row(k + 1)).transpose();
        x = lu.solve(rhs * x + forcing);
        y.row(k + 1) = (s.c * x + s.d * u.row(k + 1).transpose()).transpose();
    }
    return y;
}

Matrix time_derivative(const Matrix& u, double h)
{
    const Index rows = u.rows();
    Matrix out = Matrix::Zero(rows, u.cols());
    if (rows < 2)
    {
        return out;
    }
    out.row(0) = (u.row(1) - u.row(0)) / h;
    out.row(rows - 1) = (u.row(rows - 1) - u.row(rows - 2)) / h;
    for (Index k = 1; k + 1 < rows; ++k)
    {
        out.row(k) = (u.row(k + 1) - u.row(k - 1)) / (2.0 * h);
    }
    return out;
}

// y = sum_k M_k u^{(k)} with M_k = -C N^k A^{-1} B, N = A^{-1} E nilpotent.
Matrix run_polynomial(const DescriptorSystem& inf, const Matrix& u, double h)
{
    Matrix y = u * inf.d.transpose();
    if (inf.order() == 0)
    {
        return y;
    }
    const auto lu = factor_step(inf.a);
    const Matrix nil = lu.solve(inf.e);
    Matrix power = lu.solve(inf.b);
    Matrix deriv = u;
    const double scale = 1.0 + nil.norm();
    for (Index k = 0; k <= inf.order() && power.norm() > 1e-13 * scale * (1.0 + inf.b.norm()); ++k)
    {
        y -= deriv * (inf.c * power).transpose();
        power = nil * power;
        deriv = time_derivative(deriv, h);
    }
    return y;
}

} // namespace

Vector log_grid(double lo, double hi, Index n)
{
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
    {
        throw Error(ErrorKind::IntervalInvalid, "frequency grid needs 0 < lo < hi and at least two points");
    }
    Vector out(n);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (Index i = 0; i < n; ++i)
    {
        out(i) = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out(0) = lo;
    out(n - 1) = hi;
    return out;
}

Complex frequency_point(TimeDomain time, double omega)
{
    if (time == TimeDomain::Discrete)
    {
        return std::polar(1.0, omega);
    }
    return {0.0, omega};
}

SigmaTable sigma_data(const std::vector<System>& systems, const Vector& omega, double zero_floor)
{
    if (systems.empty())
    {
        throw Error(ErrorKind::InvalidArgument, "no systems to evaluate");
    }
    const Index k = static_cast<Index>(systems.size());
    for (const auto& s : systems)
    {
        if (inputs(s) != inputs(systems.front()) || outputs(s) != outputs(systems.front()))
        {
            throw Error(ErrorKind::DimensionMismatch, "systems must share the number of inputs and outputs");
        }
    }
    SigmaTable out;
    out.omega = omega;
    out.sigma = Matrix::Constant(omega.size(), k, nan);
    out.relerr = Matrix::Constant(omega.size(), k - 1, nan);
    for (Index i = 0; i < omega.size(); ++i)
    {
        std::vector<std::optional<ComplexMatrix>> g(static_cast<std::size_t>(k));
        bool any_singular = false;
        for (Index j = 0; j < k; ++j)
        {
            const System& s = systems[static_cast<std::size_t>(j)];
            try
            {
                const ComplexMatrix v = transfer_eval(s, frequency_point(time_domain(s), omega(i)));
                out.sigma(i, j) = Eigen::JacobiSVD<ComplexMatrix>(v).singularValues()(0);
                g[static_cast<std::size_t>(j)] = v;
            }
            catch (const Error& e)
            {
                if (e.kind() != ErrorKind::SingularAtFrequency)
                {
                    throw;
                }
                any_singular = true;
            }
        }
        if (any_singular)
        {
            out.singular.push_back(i);
        }
        if (!g[0])
        {
            continue;
        }
        if (!(out.sigma(i, 0) > zero_floor))
        {
            out.zero_reference.push_back(i);
            continue;
        }
        for (Index j = 1; j < k; ++j)
        {
            if (g[static_cast<std::size_t>(j)])
            {
                const ComplexMatrix diff = *g[0] - *g[static_cast<std::size_t>(j)];
                out.relerr(i, j - 1) = Eigen::JacobiSVD<ComplexMatrix>(diff).singularValues()(0) / out.sigma(i, 0);
            }
        }
    }
    return out;
}

std::string format_csv_number(double v)
{
    if (std::isnan(v))
    {
        return "nan";
    }
    if (std::isinf(v))
    {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string sigma_csv(const SigmaTable& table)
{
    std::ostringstream os;
    os << "omega";
    for (Index j = 0; j < table.sigma.cols(); ++j)
    {
        os << ",sigma_" << j + 1;
    }
    for (Index j = 0; j < table.relerr.cols(); ++j)
    {
        os << ",relerr_" << j + 2;
    }
    os << "\n";
    for (Index i = 0; i < table.omega.size(); ++i)
    {
        os << format_csv_number(table.omega(i));
        for (Index j = 0; j < table.sigma.cols(); ++j)
        {
            os << "," << format_csv_number(table.sigma(i, j));
        }
        for (Index j = 0; j < table.relerr.cols(); ++j)
        {
            os << "," << format_csv_number(table.relerr(i, j));
        }
        os << "\n";
    }
    return os.str();
}

SimulationSetup simulation_setup(const OptionTree& opts)
{
    SimulationSetup s;
    s.tf = opts.number("tf");
    s.steps = opts.integer("steps");
    s.input = opts.text("input");
    s.seed = static_cast<std::uint64_t>(opts.integer("seed"));
    return s;
}

Matrix input_samples(const SimulationSetup& setup, Index m)
{
    if (setup.steps < 1 || !(setup.tf > 0.0))
    {
        throw Error(ErrorKind::InvalidArgument, "simulation needs tf > 0 and at least one step");
    }
    const Index rows = setup.steps + 1;
    if (setup.input == "zero")
    {
        return Matrix::Zero(rows, m);
    }
    if (setup.input == "step")
    {
        return Matrix::Ones(rows, m);
    }
    if (setup.input == "file")
    {
        if (setup.u_file.rows() != rows || setup.u_file.cols() != m)
        {
            throw Error(ErrorKind::DimensionMismatch, "input file must hold (steps + 1) x m samples");
        }
        return setup.u_file;
    }
    if (setup.input == "noise")
    {
        std::mt19937_64 gen(setup.seed);
        std::normal_distribution<double> nd(0.0, 1.0);
        Matrix u(rows, m);
        for (Index k = 0; k < rows; ++k)
        {
            for (Index j = 0; j < m; ++j)
            {
                u(k, j) = nd(gen);
            }
        }
        return u;
    }
    throw Error(ErrorKind::InvalidArgument, "input must be noise, step, zero or file");
}

SimulationResult simulate(const System& sys, const SimulationSetup& setup, const OptionTree& decompose_opts)
{
    const FirstOrder s = first_order(sys);
    SimulationResult out;
    out.u = input_samples(setup, s.b.cols());
    const double h = setup.tf / static_cast<double>(setup.steps);
    out.t = Vector(setup.steps + 1);
    for (Index k = 0; k <= setup.steps; ++k)
    {
        out.t(k) = s.time == TimeDomain::Discrete ? static_cast<double>(k) : h * static_cast<double>(k);
    }
    if (!singular(s.e))
    {
        out.y = run_regular(s, out.u, h);
        return out;
    }
    if (s.time == TimeDomain::Discrete)
    {
        throw Error(ErrorKind::InvalidArgument, "discrete descriptor systems need an invertible E for simulation");
    }
    const SubsystemDecomposition parts = decompose(DescriptorSystem{s.e, s.a, s.b, s.c, s.d, s.time}, decompose_opts);
    std::vector<System> finite{parts.stable};
    if (parts.antistable)
    {
        finite.push_back(*parts.antistable);
    }
    out.y = run_regular(first_order(couple(finite)), out.u, h);
    if (parts.infinite)
    {
        out.y += run_polynomial(*parts.infinite, out.u, h);
    }
    return out;
}

Vector simulation_rel_error(const Matrix& y_ref, const Matrix& y_rom, double floor)
{
    if (y_ref.rows() != y_rom.rows() || y_ref.cols() != y_rom.cols())
    {
        throw Error(ErrorKind::DimensionMismatch, "trajectories must have the same shape");
    }
    Vector out(y_ref.rows());
    for (Index k = 0; k < y_ref.rows(); ++k)
    {
        double acc = 0.0;
        for (Index j = 0; j < y_ref.cols(); ++j)
        {
            const double diff = std::abs(y_ref(k, j) - y_rom(k, j));
            if (diff == 0.0)
            {
                continue;
            }
            const double den = std::max(std::abs(y_ref(k, j)), floor);
            acc += (diff / den) * (diff / den);
        }
        out(k) = std::sqrt(acc);
    }
    return out;
}

std::string simulation_csv(const SimulationResult& ref, const SimulationResult* rom, double floor)
{
    std::ostringstream os;
    os << "t";
    for (Index j = 0; j < ref.y.cols(); ++j)
    {
        os << ",y_" << j + 1;
    }
    Vector err;
    if (rom != nullptr)
    {
        for (Index j = 0; j < rom->y.cols(); ++j)
        {
            os << ",yr_" << j + 1;
        }
        os << ",relerr";
        err = simulation_rel_error(ref.y, rom->y, floor);
    }
    os << "\n";
    for (Index k = 0; k < ref.t.size(); ++k)
    {
        os << format_csv_number(ref.t(k));
        for (Index j = 0; j < ref.y.cols(); ++j)
        {
            os << "," << format_csv_number(ref.y(k, j));
        }
        if (rom != nullptr)
        {
            for (Index j = 0; j < rom->y.cols(); ++j)
            {
                os << "," << format_csv_number(rom->y(k, j));
            }
            os << "," << format_csv_number(err(k));
        }
        os << "\n";
    }
    return os.str();
}

} // namespace specmor
