#include "helpers.hpp"

#include <specmor/error.hpp>
#include <specmor/mor_so.hpp>
#include <specmor/spectral.hpp>

#include <doctest.h>

using namespace specmor;
using testkit::randn;

namespace
{

Matrix spd(Index n, std::mt19937_64& gen, double shift)
{
    const Matrix x = randn(n, n, gen);
    return x * x.transpose() / static_cast<double>(n) + shift * Matrix::Identity(n, n);
}

SecondOrderSystem random_so(Index n, Index m, Index p, std::mt19937_64& gen)
{
    const Matrix mm = spd(n, gen, 1.0);
    const Matrix kk = spd(n, gen, 1.0);
    return SecondOrderSystem{mm, 0.2 * mm + 0.1 * kk, kk, randn(n, m, gen), randn(p, n, gen), randn(p, n, gen),
                             Matrix::Zero(p, m)};
}

OptionTree order_request(long r)
{
    return OptionTree(Json{{"order", r}});
}

// Standard-form Gramians of the first-order realization by Kronecker solves.
struct DenseGramians
{
    Matrix p, q;
};

DenseGramians dense_gramians(const SecondOrderSystem& so)
{
    const DescriptorSystem fo = first_order_realization(so);
    const Matrix ei = fo.e.inverse();
    const Matrix a = ei * fo.a;
    const Matrix b = ei * fo.b;
    return {testkit::kron_sylvester(a, a.transpose(), b * b.transpose()),
            testkit::kron_sylvester(a.transpose(), a, fo.c.transpose() * fo.c)};
}

} // namespace

TEST_CASE("so_gramian_blocks examples")
{
    const SecondOrderSystem s{Matrix::Ones(1, 1), 3 * Matrix::Ones(1, 1), 2 * Matrix::Ones(1, 1), Matrix::Ones(1, 1),
                              Matrix::Ones(1, 1), Matrix::Zero(1, 1),     Matrix::Zero(1, 1)};
    const SoGramianBlocks b = so_gramian_blocks(s);
    const DenseGramians g = dense_gramians(s);
    Matrix r(2, b.rp.cols());
    r << b.rp, b.rv;
    Matrix l(2, b.lp.cols());
    l << b.lp, b.lv;
    CHECK((r * r.transpose() - g.p).norm() <= 1e-10 * g.p.norm());
    CHECK((l * l.transpose() - g.q).norm() <= 1e-10 * g.q.norm());
    CHECK(b.rp.rows() == 1);
    CHECK(b.lv.rows() == 1);

    std::mt19937_64 gen(110);
    const SecondOrderSystem big = random_so(6, 2, 2, gen);
    const SoGramianBlocks bb = so_gramian_blocks(big);
    const Matrix pp = bb.rp * bb.rp.transpose();
    const Matrix pv = bb.rv * bb.rv.transpose();
    CHECK((pp - pp.transpose()).norm() <= 1e-14 * pp.norm());
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(pp).eigenvalues().minCoeff() >= -1e-12 * pp.norm());
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(pv).eigenvalues().minCoeff() >= -1e-12 * pv.norm());
    const DenseGramians dg = dense_gramians(big);
    CHECK((pp - dg.p.topLeftCorner(6, 6)).norm() <= 1e-9 * dg.p.norm());
    const Matrix qv = bb.lvm * bb.lvm.transpose();
    CHECK((qv - dg.q.bottomRightCorner(6, 6)).norm() <= 1e-9 * dg.q.norm());

    SecondOrderSystem zero_b = big;
    zero_b.bu.setZero();
    const SoGramianBlocks zb = so_gramian_blocks(zero_b);
    CHECK(zb.rp.norm() == 0.0);
    CHECK(zb.rv.norm() == 0.0);
}

TEST_CASE("full order reproduces the transfer function for every formula")
{
    std::mt19937_64 gen(111);
    const SecondOrderSystem s = random_so(5, 2, 2, gen);
    const long before = so_gramian_computations();
    const std::vector<SoReduction> all = so_reduce_all(s, order_request(5));
    CHECK(so_gramian_computations() - before == 1);
    REQUIRE(all.size() == 8);
    for (const SoReduction& r : all)
    {
        CHECK(r.rom.m.rows() == 5);
        for (const Complex z : testkit::random_points(10, gen))
        {
            CHECK(testkit::rel_diff(transfer_eval(s, z), transfer_eval(r.rom, z)) <= 1e-8);
        }
    }
}

TEST_CASE("formula p matches a straight-line reference at n = 2")
{
    Matrix m(2, 2);
    m << 2, 0, 0, 1;
    Matrix k(2, 2);
    k << 3, -1, -1, 2;
    const SecondOrderSystem s{m, 0.1 * m + 0.2 * k, k, Matrix{{1.0}, {0.5}}, Matrix{{1.0, 0.3}},
                              Matrix::Zero(1, 2), Matrix::Zero(1, 1)};
    const SoReduction r = so_balanced_truncate(s, so_gramian_blocks(s), "p", order_request(1));

    // reference: symmetric square roots of the position blocks, SVD, projection
    const DenseGramians g = dense_gramians(s);
    const Matrix rp = Eigen::SelfAdjointEigenSolver<Matrix>(symmetric_part(g.p.topLeftCorner(2, 2))).operatorSqrt();
    const Matrix lp = Eigen::SelfAdjointEigenSolver<Matrix>(symmetric_part(g.q.topLeftCorner(2, 2))).operatorSqrt();
    Eigen::JacobiSVD<Matrix> sv(lp.transpose() * rp, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double s1 = sv.singularValues()(0);
    const Matrix t = rp * sv.matrixV().col(0) / std::sqrt(s1);
    const Matrix w = lp * sv.matrixU().col(0) / std::sqrt(s1);
    const Complex z(0, 1);
    const Complex pencil = z * z * (w.transpose() * m * t)(0, 0) + z * (w.transpose() * s.e * t)(0, 0) +
                           (w.transpose() * k * t)(0, 0);
    const Complex ref = (s.cp * t)(0, 0) * (w.transpose() * s.bu)(0, 0) / pencil;
    CHECK(std::abs(transfer_eval(r.rom, z)(0, 0) - ref) <= 1e-8 * std::abs(ref));
    CHECK(std::abs(r.hsv(0) - s1) <= 1e-10 * s1);
}

TEST_CASE("rom shapes and structure")
{
    std::mt19937_64 gen(112);
    const SecondOrderSystem s = random_so(12, 2, 3, gen);
    const SoGramianBlocks b = so_gramian_blocks(s);
    for (const auto& f : so_formulas())
    {
        const SoReduction r = so_balanced_truncate(s, b, f, order_request(4));
        CHECK(r.rom.m.rows() == 4);
        CHECK(r.rom.m.cols() == 4);
        CHECK(r.rom.e.rows() == 4);
        CHECK(r.rom.k.rows() == 4);
        CHECK(r.rom.bu.rows() == 4);
        CHECK(r.rom.bu.cols() == 2);
        CHECK(r.rom.cp.rows() == 3);
        CHECK(r.rom.cp.cols() == 4);
        CHECK(r.rom.cv.cols() == 4);
        CHECK(r.info.has("stable"));
    }
    try
    {
        so_balanced_truncate(s, b, "xyz", order_request(2));
        FAIL("expected FormulaUnknown");
    }
    catch (const Error& e)
    {
        CHECK(e.kind() == ErrorKind::FormulaUnknown);
    }
    try
    {
        so_balanced_truncate(s, b, "p", order_request(13));
        FAIL("expected OrderTooLarge");
    }
    catch (const Error& e)
    {
        CHECK(e.kind() == ErrorKind::OrderTooLarge);
    }
}

TEST_CASE("one-sided so projection keeps M and K symmetric positive definite")
{
    std::mt19937_64 gen(113);
    const SecondOrderSystem s = random_so(10, 1, 1, gen);
    OptionTree req(Json{{"order", 4}, {"one_sided", true}});
    const SoReduction r = so_balanced_truncate(s, so_gramian_blocks(s), "so", req);
    CHECK((r.rom.m - r.rom.m.transpose()).norm() <= 1e-12 * r.rom.m.norm());
    CHECK((r.rom.k - r.rom.k.transpose()).norm() <= 1e-12 * r.rom.k.norm());
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(symmetric_part(r.rom.m)).eigenvalues().minCoeff() > 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(symmetric_part(r.rom.k)).eigenvalues().minCoeff() > 0.0);
    CHECK(r.info.get("stable") == true);
}

TEST_CASE("limited second-order truncation")
{
    std::mt19937_64 gen(114);
    const SecondOrderSystem s = random_so(6, 1, 1, gen);
    const SoReduction unl = so_balanced_truncate(s, so_gramian_blocks(s), "p", order_request(3));
    const SoReduction tl = so_limited_truncate(s, "p", {LimitedMode::Kind::Time, 0, 200}, order_request(3));
    for (const Complex z : testkit::random_points(5, gen))
    {
        CHECK(testkit::rel_diff(transfer_eval(unl.rom, z), transfer_eval(tl.rom, z)) <= 1e-6);
    }
    const SoReduction fl = so_limited_truncate(s, "v", {LimitedMode::Kind::Frequency, 0.5, 2.0}, order_request(3));
    CHECK(fl.rom.m.rows() == 3);
    const SoReduction full =
        so_limited_truncate(s, "p", {LimitedMode::Kind::Frequency, 0, std::numeric_limits<double>::infinity()},
                            order_request(3));
    for (const Complex z : testkit::random_points(5, gen))
    {
        CHECK(testkit::rel_diff(transfer_eval(unl.rom, z), transfer_eval(full.rom, z)) <= 1e-6);
    }
    try
    {
        so_limited_truncate(s, "p", {LimitedMode::Kind::Time, 0, -1}, order_request(3));
        FAIL("expected IntervalInvalid");
    }
    catch (const Error& e)
    {
        CHECK(e.kind() == ErrorKind::IntervalInvalid);
    }
}

TEST_CASE("so_reduce uses the formula option")
{
    std::mt19937_64 gen(115);
    const SecondOrderSystem s = random_so(6, 1, 1, gen);
    const SoReduction r = so_reduce(s, OptionTree(Json{{"formula", "vp"}, {"order", 2}}));
    CHECK(r.info.get("formula") == "vp");
    CHECK_THROWS_AS(so_reduce(s, OptionTree(Json{{"formula", "zz"}, {"order", 2}})), Error);
}
