#ifndef SPECMOR_TESTS_HELPERS_HPP
#define SPECMOR_TESTS_HELPERS_HPP

#include <specmor/dense.hpp>
#include <specmor/system.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace testkit
{

using specmor::Complex;
using specmor::ComplexMatrix;
using specmor::Index;
using specmor::Matrix;
using specmor::Vector;

inline Matrix randn(Index rows, Index cols, std::mt19937_64& gen)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
    {
        for (Index i = 0; i < rows; ++i)
        {
            m(i, j) = nd(gen);
        }
    }
    return m;
}

inline double uniform(double lo, double hi, std::mt19937_64& gen)
{
    std::uniform_real_distribution<double> ud(lo, hi);
    return ud(gen);
}

inline Matrix random_orthogonal(Index n, std::mt19937_64& gen)
{
    Eigen::HouseholderQR<Matrix> qr(randn(n, n, gen));
    return qr.householderQ();
}

// Well-conditioned similarity: orthogonal * diag(1..3) * orthogonal.
inline Matrix random_similarity(Index n, std::mt19937_64& gen)
{
    Vector d(n);
    for (Index i = 0; i < n; ++i)
    {
        d(i) = uniform(1.0, 3.0, gen);
    }
    return random_orthogonal(n, gen) * d.asDiagonal() * random_orthogonal(n, gen);
}

// Real block-diagonal matrix with the requested real parts; pairs of entries
// become 2x2 rotation blocks when `complex_pairs` is set.
inline Matrix block_spectrum(const std::vector<double>& re, bool complex_pairs, std::mt19937_64& gen)
{
    const Index n = static_cast<Index>(re.size());
    Matrix a = Matrix::Zero(n, n);
    Index i = 0;
    while (i < n)
    {
        if (complex_pairs && i + 1 < n && re[i] * re[i + 1] > 0.0 && uniform(0, 1, gen) < 0.5)
        {
            const double r = re[i];
            const double w = uniform(0.2, 2.0, gen);
            a(i, i) = r;
            a(i + 1, i + 1) = r;
            a(i, i + 1) = w;
            a(i + 1, i) = -w;
            i += 2;
        }
        else
        {
            a(i, i) = re[i];
            ++i;
        }
    }
    return a;
}

// V * blocks * V^{-1} with the given real parts.
inline Matrix matrix_with_real_parts(const std::vector<double>& re, std::mt19937_64& gen, bool complex_pairs = true)
{
    const Index n = static_cast<Index>(re.size());
    const Matrix v = random_similarity(n, gen);
    return v * block_spectrum(re, complex_pairs, gen) * v.inverse();
}

inline Matrix random_stable(Index n, std::mt19937_64& gen, double lo = -3.0, double hi = -0.1)
{
    std::vector<double> re(static_cast<std::size_t>(n));
    for (auto& r : re)
    {
        r = uniform(lo, hi, gen);
    }
    return matrix_with_real_parts(re, gen);
}

inline Eigen::VectorXcd eigenvalues(const Matrix& a)
{
    Eigen::EigenSolver<Matrix> es(a, false);
    return es.eigenvalues();
}

inline Index count_left(const Matrix& a)
{
    const auto ev = eigenvalues(a);
    Index k = 0;
    for (Index i = 0; i < ev.size(); ++i)
    {
        k += ev(i).real() < 0.0 ? 1 : 0;
    }
    return k;
}

inline double max_real_part(const Matrix& a)
{
    if (a.rows() == 0)
    {
        return -std::numeric_limits<double>::infinity();
    }
    return eigenvalues(a).real().maxCoeff();
}

// Kronecker oracle for  A X + X B + C = 0  (X is rows(A) x cols(B)).
inline Matrix kron_sylvester(const Matrix& a, const Matrix& b, const Matrix& c)
{
    const Index m = a.rows();
    const Index n = b.rows();
    Matrix k = Matrix::Zero(m * n, m * n);
    for (Index j = 0; j < n; ++j)
    {
        k.block(j * m, j * m, m, m) += a;
        for (Index i = 0; i < n; ++i)
        {
            k.block(i * m, j * m, m, m) += b(j, i) * Matrix::Identity(m, m);
        }
    }
    Vector rhs = -Eigen::Map<const Vector>(c.data(), m * n);
    Vector x = k.partialPivLu().solve(rhs);
    return Eigen::Map<Matrix>(x.data(), m, n);
}

// Kronecker oracle for  A X A^T - X + W = 0.
inline Matrix kron_stein(const Matrix& a, const Matrix& w)
{
    const Index n = a.rows();
    Matrix k = Matrix::Identity(n * n, n * n);
    for (Index j = 0; j < n; ++j)
    {
        for (Index i = 0; i < n; ++i)
        {
            k.block(i * n, j * n, n, n) -= a(i, j) * a;
        }
    }
    Vector rhs = Eigen::Map<const Vector>(w.data(), n * n);
    Vector x = k.partialPivLu().solve(rhs);
    return Eigen::Map<Matrix>(x.data(), n, n);
}

inline std::vector<Complex> random_points(int count, std::mt19937_64& gen, double scale = 3.0)
{
    std::vector<Complex> pts;
    for (int i = 0; i < count; ++i)
    {
        pts.emplace_back(uniform(-scale, scale, gen), uniform(-scale, scale, gen));
    }
    return pts;
}

inline double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b)
{
    return (a - b).norm() / std::max(a.norm(), 1e-300);
}

inline double sigma_max(const ComplexMatrix& g)
{
    Eigen::JacobiSVD<ComplexMatrix> svd(g);
    return svd.singularValues()(0);
}

inline specmor::StandardSystem random_standard(Index n, Index m, Index p, std::mt19937_64& gen,
                                               const Matrix& a)
{
    return specmor::StandardSystem{a, randn(n, m, gen), randn(p, n, gen), randn(p, m, gen),
                                   specmor::TimeDomain::Continuous};
}

// Grid-sup of sigma_max(G1(iw) - G2(iw)) on a log grid.
template <class S1, class S2>
double hinf_grid(const S1& g1, const S2& g2, double wlo, double whi, int count)
{
    double best = 0.0;
    for (int i = 0; i < count; ++i)
    {
        const double w = std::pow(10.0, std::log10(wlo) + (std::log10(whi) - std::log10(wlo)) * i / (count - 1));
        const Complex s(0.0, w);
        best = std::max(best, sigma_max(specmor::transfer_eval(g1, s) - specmor::transfer_eval(g2, s)));
    }
    // w = 0 as well
    best = std::max(best, sigma_max(specmor::transfer_eval(g1, Complex(0, 0)) - specmor::transfer_eval(g2, Complex(0, 0))));
    return best;
}

} // namespace testkit

#endif // SPECMOR_TESTS_HELPERS_HPP
