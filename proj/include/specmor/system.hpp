#ifndef SPECMOR_SYSTEM_HPP
#define SPECMOR_SYSTEM_HPP

#include <specmor/dense.hpp>

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace specmor
{

enum class TimeDomain
{
    Continuous,
    Discrete,
};

using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// x' = A x + B u,  y = C x + D u  (ct_ss / dt_ss)
struct StandardSystem
{
    Matrix a, b, c, d;
    TimeDomain time = TimeDomain::Continuous;

    Index order() const { return a.rows(); }
    Index inputs() const { return b.cols(); }
    Index outputs() const { return c.rows(); }
};

// E x' = A x + B u,  y = C x + D u  (ct_dss / dt_dss)
struct DescriptorSystem
{
    Matrix e, a, b, c, d;
    TimeDomain time = TimeDomain::Continuous;

    Index order() const { return a.rows(); }
    Index inputs() const { return b.cols(); }
    Index outputs() const { return c.rows(); }
};

// M x'' = -K x - E x' + Bu u,  y = Cp x + Cv x' + D u  (ct_soss)
struct SecondOrderSystem
{
    Matrix m, e, k, bu, cp, cv, d;

    Index order() const { return m.rows(); }
    Index inputs() const { return bu.cols(); }
    Index outputs() const { return cp.rows(); }
};

using System = std::variant<StandardSystem, DescriptorSystem, SecondOrderSystem>;

/// Routine-style class tag: ct_ss, dt_ss, ct_dss, dt_dss, ct_soss.
std::string class_name(const System& sys);

Index order(const System& sys);
Index inputs(const System& sys);
Index outputs(const System& sys);
TimeDomain time_domain(const System& sys);

/// E = I embedding of a standard system.
DescriptorSystem to_descriptor(const StandardSystem& sys);

struct ValidationReport
{
    std::vector<std::string> issues; // violated invariants
    std::vector<std::string> notes;  // informational (e.g. omitted D)

    bool ok() const { return issues.empty(); }
};

ValidationReport validate(const System& sys);

/// G(s) = C (sE - A)^{-1} B + D, or the second-order form
/// (Cp + s Cv)(s^2 M + s E + K)^{-1} Bu + D. For discrete systems s is the
/// z-domain point. Throws Error(SingularAtFrequency).
ComplexMatrix transfer_eval(const StandardSystem& sys, Complex s);
ComplexMatrix transfer_eval(const DescriptorSystem& sys, Complex s);
ComplexMatrix transfer_eval(const SecondOrderSystem& sys, Complex s);
ComplexMatrix transfer_eval(const System& sys, Complex s);

/// Solve (Zr + i Zi) X = (Br + i Bi) through the real 2n x 2n embedding.
ComplexMatrix complex_solve(const Matrix& zr, const Matrix& zi, const ComplexMatrix& rhs);

/// Companion form E = [I 0; 0 M], A = [0 I; -K -E], B = [0; Bu], C = [Cp Cv].
DescriptorSystem first_order_realization(const SecondOrderSystem& so);

} // namespace specmor

#endif // SPECMOR_SYSTEM_HPP
