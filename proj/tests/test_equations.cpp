#include "helpers.hpp"

#include <specmor/equations.hpp>
#include <specmor/error.hpp>
#include <specmor/spectral.hpp>

#include <doctest.h>

using namespace specmor;
using testkit::randn;

namespace
{

Matrix scalar(double v)
{
    return Matrix::Constant(1, 1, v);
}

Matrix gram(const Matrix& z)
{
    return z * z.transpose();
}

} // namespace

TEST_CASE("solve_lyapunov examples")
{
    const Matrix p = gram(solve_lyapunov(scalar(-1), {}, scalar(std::sqrt(2.0)), GramianSide::Controllability,
                                         TimeDomain::Continuous));
    CHECK(std::abs(p(0, 0) - 1.0) < 1e-14);

    Matrix a = Vector{{-1.0, -2.0}}.asDiagonal();
    const Matrix p2 = gram(solve_lyapunov(a, {}, Matrix::Ones(2, 1), GramianSide::Controllability, TimeDomain::Continuous));
    Matrix expect(2, 2);
    expect << 0.5, 1.0 / 3, 1.0 / 3, 0.25;
    CHECK((p2 - expect).norm() < 1e-13);

    const Matrix p3 = gram(solve_lyapunov(scalar(0.5), {}, scalar(1), GramianSide::Controllability, TimeDomain::Discrete));
    CHECK(std::abs(p3(0, 0) - 4.0 / 3) < 1e-14);

    try
    {
        solve_lyapunov(scalar(1), {}, scalar(1), GramianSide::Controllability, TimeDomain::Continuous);
        FAIL("expected UnstableSpectrum");
    }
    catch (const Error& e)
    {
        CHECK(e.kind() == ErrorKind::UnstableSpectrum);
    }
    try
    {
        solve_lyapunov(scalar(2), {}, scalar(1), GramianSide::Controllability, TimeDomain::Discrete);
        FAIL("expected UnstableSpectrum");
    }
    catch (const Error& e)
    {
        CHECK(e.kind() == ErrorKind::UnstableSpectrum);
    }
}

TEST_CASE("Lyapunov residuals and Kronecker oracle")
{
    std::mt19937_64 gen(41);
    for (int t = 0; t < 20; ++t)
    {
        const Index n = 2 + t % 5;
        const Matrix a = testkit::random_stable(n, gen);
        const Matrix e = testkit::random_similarity(n, gen);
        const Matrix b = randn(n, 2, gen);
        const Matrix c = randn(3, n, gen);
        const Matrix ae = a * e; // keeps the pencil (ae, e) stable via E^{-1} (A E)
        const Matrix ea = e * a;

        // A X E^T + E X A^T + B B^T = 0 with pencil eigenvalues of E^{-1} (E A)
        const Matrix p = gram(solve_lyapunov(ea, e, b, GramianSide::Controllability, TimeDomain::Continuous));
        CHECK((p - p.transpose()).norm() == 0.0);
        const Matrix res = ea * p * e.transpose() + e * p * ea.transpose() + b * b.transpose();
        CHECK(res.norm() <= 1e-9 * (ea.norm() * e.norm() * p.norm() + b.squaredNorm()));
        const Matrix ei = e.inverse();
        const Matrix oracle = testkit::kron_sylvester(a, a.transpose(), ei * b * b.transpose() * ei.transpose());
        CHECK((p - oracle).norm() <= 1e-9 * oracle.norm());

        // A^T Q E + E^T Q A + C^T C = 0
        const Matrix q = gram(solve_lyapunov(ae, e, c, GramianSide::Observability, TimeDomain::Continuous));
        const Matrix rq = ae.transpose() * q * e + e.transpose() * q * ae + c.transpose() * c;
        CHECK(rq.norm() <= 1e-9 * (ae.norm() * e.norm() * q.norm() + c.squaredNorm()));

        // discrete, standard
        const Matrix ad = a / (1.1 * testkit::eigenvalues(a).cwiseAbs().maxCoeff());
        const Matrix pd = gram(solve_lyapunov(ad, {}, b, GramianSide::Controllability, TimeDomain::Discrete));
        CHECK((pd - testkit::kron_stein(ad, b * b.transpose())).norm() <= 1e-9 * pd.norm());
        const Matrix qd = gram(solve_lyapunov(ad, {}, c, GramianSide::Observability, TimeDomain::Discrete));
        CHECK((qd - testkit::kron_stein(ad.transpose(), c.transpose() * c)).norm() <= 1e-9 * qd.norm());

        // discrete, generalized: A X A^T - E X E^T + B B^T = 0
        const Matrix ead = e * ad;
        const Matrix pg = gram(solve_lyapunov(ead, e, b, GramianSide::Controllability, TimeDomain::Discrete));
        const Matrix rg = ead * pg * ead.transpose() - e * pg * e.transpose() + b * b.transpose();
        CHECK(rg.norm() <= 1e-9 * (e.squaredNorm() * pg.norm() + b.squaredNorm()));
    }
}

TEST_CASE("Lyapunov relative residual at n = 30")
{
    std::mt19937_64 gen(42);
    for (int t = 0; t < 3; ++t)
    {
        const Matrix a = testkit::random_stable(30, gen);
        const Matrix b = randn(30, 3, gen);
        const Matrix p = gram(solve_lyapunov(a, {}, b, GramianSide::Controllability, TimeDomain::Continuous));
        const Matrix r = a * p + p * a.transpose() + b * b.transpose();
        CHECK(r.norm() / (2 * a.norm() * p.norm() + b.squaredNorm()) <= 1e-8);
    }
}

TEST_CASE("solve_lyapunov_dense with indefinite right-hand side")
{
    std::mt19937_64 gen(43);
    const Matrix a = testkit::random_stable(5, gen);
    const Matrix w = symmetric_part(randn(5, 5, gen));
    const Matrix x = solve_lyapunov_dense(a, {}, w, GramianSide::Controllability, TimeDomain::Continuous);
    CHECK((x - testkit::kron_sylvester(a, a.transpose(), w)).norm() <= 1e-9 * x.norm());
}

TEST_CASE("solve_sylvester examples")
{
    CHECK(std::abs(solve_sylvester(scalar(2), scalar(-1), scalar(3), TimeDomain::Continuous)(0, 0) + 1.0) < 1e-14);
    CHECK(solve_sylvester(scalar(2), scalar(-1), scalar(0), TimeDomain::Continuous).norm() == 0.0);

    std::mt19937_64 gen(51);
    for (int t = 0; t < 10; ++t)
    {
        const Matrix au = -testkit::random_stable(4, gen);
        const Matrix as = testkit::random_stable(4, gen);
        const Matrix w = randn(4, 4, gen);
        const Matrix x = solve_sylvester(au, as, w, TimeDomain::Continuous);
        const Matrix oracle = testkit::kron_sylvester(-au, as, -w);
        CHECK((x - oracle).norm() <= 1e-10 * oracle.norm());
        const double res = (-au * x + x * as - w).norm();
        CHECK(res <= 1e-8 * (au.norm() + as.norm()) * x.norm());

        // reversed roles: stable left block
        const Matrix y = solve_sylvester(as, au, w, TimeDomain::Continuous);
        CHECK((-as * y + y * au - w).norm() <= 1e-8 * (au.norm() + as.norm()) * y.norm());
    }
}

TEST_CASE("solve_sylvester rectangular and discrete")
{
    std::mt19937_64 gen(52);
    for (int t = 0; t < 10; ++t)
    {
        const Matrix au = -testkit::random_stable(3, gen);
        const Matrix as = testkit::random_stable(5, gen);
        const Matrix w = randn(3, 5, gen);
        const Matrix x = solve_sylvester(au, as, w, TimeDomain::Continuous);
        CHECK((x - testkit::kron_sylvester(-au, as, -w)).norm() <= 1e-9 * x.norm());

        // discrete: |eig(pd)| > 1, |eig(rd)| < 1
        const Matrix rd = 0.5 * testkit::random_similarity(5, gen) * Matrix::Identity(5, 5) / 3.0;
        const Matrix pd = 3.0 * Matrix::Identity(3, 3) + 0.3 * randn(3, 3, gen);
        const Matrix xd = solve_sylvester(pd, rd, w, TimeDomain::Discrete);
        CHECK((-pd * xd + xd * rd - w).norm() <= 1e-9 * (pd.norm() + rd.norm()) * xd.norm());
    }
}

TEST_CASE("solve_sylvester reports overlapping spectra")
{
    try
    {
        solve_sylvester(scalar(-1), scalar(-2), scalar(1), TimeDomain::Continuous);
        FAIL("expected SpectraOverlap");
    }
    catch (const Error& e)
    {
        CHECK(e.kind() == ErrorKind::SpectraOverlap);
    }
}

TEST_CASE("solve_care examples")
{
    CHECK(std::abs(solve_care_bc(scalar(0), scalar(1), scalar(1))(0, 0) - 1.0) < 1e-13);
    CHECK(std::abs(solve_care_bc(scalar(-1), scalar(1), scalar(1))(0, 0) - (std::sqrt(2.0) - 1.0)) < 1e-13);

    std::mt19937_64 gen(61);
    for (int t = 0; t < 20; ++t)
    {
        const Index n = 5 + (t % 4) * 8;
        const Matrix a = randn(n, n, gen) / std::sqrt(static_cast<double>(n));
        const Matrix b = randn(n, 2, gen);
        const Matrix c = randn(2, n, gen);
        const Matrix x = solve_care_bc(a, b, c);
        const Matrix g = b * b.transpose();
        const Matrix r = a.transpose() * x + x * a - x * g * x + c.transpose() * c;
        const double scale = 2 * a.norm() * x.norm() + g.norm() * x.squaredNorm() + c.squaredNorm();
        CHECK(r.norm() / scale <= 1e-8);
        CHECK((x - x.transpose()).norm() <= 1e-10 * x.norm());
        CHECK(is_hurwitz(a - g * x));
    }
}

TEST_CASE("solve_care agrees with the Kronecker form of the Newton step")
{
    // At the solution X the Newton-Kleinman correction vanishes:
    // (A - G X)^T Y + Y (A - G X) = -(Q + X G X) has Y = X.
    std::mt19937_64 gen(62);
    for (int t = 0; t < 5; ++t)
    {
        const Index n = 3 + t % 4;
        const Matrix a = randn(n, n, gen);
        const Matrix b = randn(n, 1, gen);
        const Matrix c = randn(1, n, gen);
        const Matrix x = solve_care_bc(a, b, c);
        const Matrix g = b * b.transpose();
        const Matrix ak = a - g * x;
        const Matrix y = testkit::kron_sylvester(ak.transpose(), ak, c.transpose() * c + x * g * x);
        CHECK((y - x).norm() <= 1e-9 * x.norm());
    }
}

TEST_CASE("solve_dare examples and residuals")
{
    // x = 1 + 4 x / (1 + x)  =>  x^2 - 4 x - 1 = 0
    CHECK(std::abs(solve_dare(scalar(2), scalar(1), scalar(1))(0, 0) - (2 + std::sqrt(5.0))) < 1e-12);
    CHECK(std::abs(solve_dare(scalar(0), scalar(1), scalar(3))(0, 0) - 3.0) < 1e-13);

    std::mt19937_64 gen(63);
    for (int t = 0; t < 10; ++t)
    {
        const Index n = 3 + t;
        const Matrix a = 1.5 * randn(n, n, gen) / std::sqrt(static_cast<double>(n));
        const Matrix b = randn(n, 2, gen);
        const Matrix c = randn(2, n, gen);
        const Matrix g = b * b.transpose();
        const Matrix q = c.transpose() * c;
        const Matrix x = solve_dare(a, g, q);
        const Matrix eye = Matrix::Identity(n, n);
        const Matrix r = q + a.transpose() * x * (eye + g * x).partialPivLu().solve(a) - x;
        CHECK(r.norm() <= 1e-8 * x.norm());
        const Matrix acl = (eye + g * x).partialPivLu().solve(a);
        CHECK(testkit::eigenvalues(acl).cwiseAbs().maxCoeff() < 1.0);
    }
}

TEST_CASE("solve_care rejects axis eigenvalues")
{
    // A = 0, G = 0, Q = 0: the Hamiltonian is zero
    try
    {
        solve_care(scalar(0), scalar(0), scalar(0));
        FAIL("expected an error");
    }
    catch (const Error& e)
    {
        CHECK((e.kind() == ErrorKind::HamiltonianAxisEigenvalues ||
               e.kind() == ErrorKind::SubspaceDimensionMismatch));
    }
}

TEST_CASE("limited_gramians examples")
{
    const DescriptorSystem s{scalar(1), scalar(-1), scalar(1), scalar(1), scalar(0)};
    const GramianFactors t20 = limited_gramians(s, {LimitedMode::Kind::Time, 0, 20});
    CHECK(std::abs(gram(t20.r)(0, 0) - 0.5) <= 1e-8);
    const GramianFactors t1 = limited_gramians(s, {LimitedMode::Kind::Time, 0, 1});
    CHECK(std::abs(gram(t1.r)(0, 0) - (1 - std::exp(-2.0)) / 2) <= 1e-12);
    CHECK(std::abs(gram(t1.l)(0, 0) - (1 - std::exp(-2.0)) / 2) <= 1e-12);

    const GramianFactors full =
        limited_gramians(s, {LimitedMode::Kind::Frequency, 0, std::numeric_limits<double>::infinity()});
    CHECK(std::abs(gram(full.r)(0, 0) - 0.5) <= 1e-6);

    // scalar band [0, w]: P = atan(w) / pi
    const GramianFactors band = limited_gramians(s, {LimitedMode::Kind::Frequency, 0, 1});
    CHECK(std::abs(gram(band.r)(0, 0) - std::atan(1.0) / M_PI) <= 1e-10);

    for (const LimitedMode bad : {LimitedMode{LimitedMode::Kind::Frequency, 2, 1},
                                  LimitedMode{LimitedMode::Kind::Frequency, -1, 1},
                                  LimitedMode{LimitedMode::Kind::Time, 0, 0}})
    {
        try
        {
            limited_gramians(s, bad);
            FAIL("expected IntervalInvalid");
        }
        catch (const Error& e)
        {
            CHECK(e.kind() == ErrorKind::IntervalInvalid);
        }
    }
}

TEST_CASE("frequency-limited Gramian matches quadrature")
{
    // P = 1/pi Re int_{w1}^{w2} (iwI - A)^{-1} B B^T (iwI - A)^{-H} dw
    std::mt19937_64 gen(71);
    const Matrix a = testkit::random_stable(4, gen, -2.0, -0.5);
    const Matrix b = randn(4, 1, gen);
    const DescriptorSystem s{Matrix::Identity(4, 4), a, b, randn(1, 4, gen), scalar(0)};
    const double w1 = 0.5;
    const double w2 = 2.0;
    const GramianFactors f = limited_gramians(s, {LimitedMode::Kind::Frequency, w1, w2});
    const Matrix p = gram(f.r);
    const int steps = 4000;
    Matrix acc = Matrix::Zero(4, 4);
    const double h = (w2 - w1) / steps;
    for (int i = 0; i <= steps; ++i)
    {
        const double w = w1 + h * i;
        const double wt = (i == 0 || i == steps) ? 0.5 : 1.0;
        const ComplexMatrix z = (Complex(0, w) * ComplexMatrix::Identity(4, 4) - a.cast<Complex>())
                                    .partialPivLu()
                                    .solve(b.cast<Complex>());
        acc += wt * h * (z * z.adjoint()).real();
    }
    acc /= M_PI;
    CHECK((p - acc).norm() <= 1e-5 * acc.norm());
}

TEST_CASE("frequency_selector examples")
{
    std::mt19937_64 gen(72);
    const Matrix a = testkit::random_stable(5, gen);
    CHECK(frequency_selector(a, 0.0).norm() <= 1e-12);
    const Matrix inf = frequency_selector(a, std::numeric_limits<double>::infinity());
    CHECK((inf - 0.5 * Matrix::Identity(5, 5)).norm() == 0.0);
    // diagonal case: atan(w / -lambda) / pi
    Matrix d = Vector{{-1.0, -3.0}}.asDiagonal();
    const Matrix s = frequency_selector(d, 2.0);
    CHECK(std::abs(s(0, 0) - std::atan(2.0) / M_PI) < 1e-10);
    CHECK(std::abs(s(1, 1) - std::atan(2.0 / 3.0) / M_PI) < 1e-10);
}

TEST_CASE("compress_columns and psd_factor")
{
    std::mt19937_64 gen(73);
    const Matrix z = randn(6, 2, gen);
    Matrix wide(6, 6);
    wide << z, z, z;
    const Matrix c = compress_columns(wide, 1e-12);
    CHECK(c.cols() == 2);
    CHECK((gram(c) - gram(wide)).norm() <= 1e-12 * gram(wide).norm());

    const Matrix f = psd_factor(gram(z), 1e-12);
    CHECK(f.cols() == 2);
    CHECK((gram(f) - gram(z)).norm() <= 1e-12 * gram(z).norm());
}
