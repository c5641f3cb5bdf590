#include <cmath>

#include <lamegf/fd.hpp>
#include <lamegf/green2d.hpp>

#include "fourier_oracle.hpp"
#include "testing.hpp"

using namespace lamegf;

namespace {

Mat2 sub2(const Mat3& m)
{
    Mat2 s;
    s << m(0, 0), m(0, 2), m(2, 0), m(2, 2);
    return s;
}

} // namespace

TEST(ModeTerm2D, LiteralMatchesUnified)
{
    auto med = make_medium(2, 1, 1, 3);
    for (double a : {0.3, 1.9, 3.5})
        for (int m = -2; m <= 2; ++m)
            for (double t : {0.4, -0.9, 1.7}) {
                auto d = classify_mode(med, qp2d(a), m);
                auto L = mode_term_2d(med, d, t, 0.0, Form::Literal);
                auto U = mode_term_2d(med, d, t, 0.0, Form::Unified);
                EXPECT_LT(max_abs(L.matrix - U.matrix), 1e-13 * std::max(1.0, max_abs(U.matrix)))
                    << a << " " << m << " " << t;
            }
}

TEST(ModeTerm2D, SymbolInversionOracle)
{
    // one mode from each class
    auto med = make_medium(2, 1, 1, 3);
    for (double a : {0.5, 2.2, 4.1})
        for (double t : {0.7, -1.2}) {
            auto d = classify_mode(med, qp2d(a), 0);
            auto L = mode_term_2d(med, d, t, 0.0, Form::Literal);
            const Mat2 O = two_pi * sub2(oracle::biqp_coefficient(med, a, 0.0, t));
            EXPECT_LT(max_abs(L.matrix - O), 1e-6 * max_abs(O)) << a << " " << t;
        }
}

TEST(ModeTerm2D, OffDiagonalVanishesAtZeroAlpha)
{
    auto med = make_medium(2, 1, 1, 3);
    auto d = classify_mode(med, qp2d(0.0), 0);
    auto L = mode_term_2d(med, d, 0.6, 0.0, Form::Literal);
    EXPECT_EQ(L.matrix(0, 1), 0.0);
    EXPECT_EQ(L.matrix(1, 0), 0.0);
}

TEST(ModeTerm2D, MirrorSymmetry)
{
    auto med = make_medium(1.4, 0.8, 1.1, 4);
    for (int m = -2; m <= 2; ++m) {
        auto d = classify_mode(med, qp2d(0.45), m);
        auto e = classify_mode(med, qp2d(-0.45), -m);
        for (Form f : {Form::Literal, Form::Unified}) {
            auto A = mode_term_2d(med, e, 0.2, 0.9, f);
            auto B = mode_term_2d(med, d, 0.9, 0.2, f);
            EXPECT_LT(max_abs(A.matrix - B.matrix), 1e-15 * max_abs(B.matrix));
        }
    }
}

TEST(Green2D, QuasiPeriodic)
{
    auto med = make_medium(2, 1, 1, 3);
    auto q = qp2d(0.7);
    const Vec2 x(0.3, 0.5), y(0.1, -0.2);
    auto g = green2d_eval(med, q, x, y).value;
    auto g1 = green2d_eval(med, q, x + Vec2(1, 0), y).value;
    auto g2 = green2d_eval(med, q, x, y + Vec2(1, 0)).value;
    EXPECT_LT(max_abs(g1 - std::exp(I * 0.7) * g), 1e-13 * max_abs(g));
    EXPECT_LT(max_abs(g2 - std::exp(-I * 0.7) * g), 1e-13 * max_abs(g));
}

TEST(Green2D, Reciprocity)
{
    auto med = make_medium(2, 1, 1, 3);
    const Vec2 x(0.3, 0.5), z(-0.4, 0.1);
    auto a = green2d_eval(med, qp2d(0.7), x, z).value;
    auto b = green2d_eval(med, qp2d(-0.7), z, x).value;
    EXPECT_LT(max_abs(a - b), 1e-13 * max_abs(a));
}

TEST(Green2D, LatticeOracle)
{
    auto med = make_medium(2, 1, 1, 1, 0.1);
    const Vec2 x(0.25, 1.0), y(0, 0);
    auto s = green2d_eval(med, qp2d(0.3), x, y, 1e-14);
    auto l = lattice_sum(med, qp2d(0.3), Eigen::VectorXd(x), Eigen::VectorXd(y));
    EXPECT_LT(max_abs(s.value - l.value), 1e-4 * max_abs(l.value));
}

TEST(Green2D, NavierResidual)
{
    auto med = make_medium(2, 1, 1, 3);
    auto q = qp2d(0.4);
    const Vec2 y(0, 0);
    TensorField<2> f = [&](const Vec2& x) { return Mat2(green2d_eval(med, q, x, y, 1e-15).value); };
    const Vec2 x(0.3, 0.8);
    const double r1 = navier_residual_rel<2>(med, f, x, 2e-2), r2 = navier_residual_rel<2>(med, f, x, 1e-2);
    EXPECT_LT(r2, 1e-6);
    EXPECT_GT(r1 / r2, 12.0);
    EXPECT_LT(r1 / r2, 20.0);
}

TEST(Green2D, TruncationHonest)
{
    auto med = make_medium(2, 1, 1, 3);
    const Vec2 x(0.2, 0.05), y(0, 0);
    auto a = green2d_eval(med, qp2d(0.4), x, y, 1e-6);
    auto b = green2d_eval(med, qp2d(0.4), x, y, 1e-12);
    EXPECT_GT(b.modes_used, a.modes_used);
    EXPECT_LE(max_abs(a.value - b.value), a.tail_bound + b.tail_bound);
}

TEST(Green2D, EvanescentDecay)
{
    auto med = make_medium(2, 1, 1, 3);
    auto d = classify_mode(med, qp2d(0.4), 2);
    ASSERT_EQ(d.cls, ModeClass::L3);
    // ks > kp, so the s part sets the slowest rate
    const double rate = std::sqrt(d.alpha_l * d.alpha_l - med.ks() * med.ks());
    double lo = 1e300, hi = 0;
    for (double t : {1.0, 1.5, 2.0}) {
        const double v = max_abs(mode_term_2d(med, d, t, 0.0).matrix) * std::exp(rate * t);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_LT(hi / lo, 2.0);
}

TEST(Green2D, Errors)
{
    auto med = make_medium(2, 1, 1, 3);
    EXPECT_KIND(green2d_eval(med, qp2d(0.4), Vec2(0.3, 1e-4), Vec2(0, 0)), ErrorKind::NearSourceLine);
    EXPECT_KIND(green2d_eval(med, qp2d(med.kp()), Vec2(0.3, 0.5), Vec2(0, 0)), ErrorKind::WoodAnomaly);
    auto damped = make_medium(2, 1, 1, 3, 0.1);
    auto d = classify_mode(damped, qp2d(0.4), 0);
    EXPECT_KIND(mode_term_2d(damped, d, 0.5, 0.0, Form::Literal), ErrorKind::DomainError);
}

TEST(Green2D, JetMatchesDifferences)
{
    auto med = make_medium(2, 1, 1, 3);
    auto q = qp2d(0.4);
    const Vec2 x(0.3, 0.6), y(0, 0);
    auto J = green2d_jet(med, q, x, y);
    const double h = 1e-5;
    for (int k = 0; k < 2; ++k) {
        Vec2 e = Vec2::Zero();
        e(k) = h;
        const Mat2 d = (green2d_eval(med, q, x + e, y).value - green2d_eval(med, q, x - e, y).value) / (2 * h);
        EXPECT_LT(max_abs(J.dG[k] - d), 1e-7 * max_abs(J.dG[k]));
    }
}
