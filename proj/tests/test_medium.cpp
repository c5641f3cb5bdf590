#include <cmath>

#include <lamegf/medium.hpp>

#include "testing.hpp"

using namespace lamegf;

TEST(Medium, Wavenumbers)
{
    auto m = make_medium(2, 1, 1, 1);
    EXPECT_DOUBLE_EQ(m.kp(), 0.5);
    EXPECT_DOUBLE_EQ(m.ks(), 1.0);
    auto m2 = make_medium(0, 1, 1, 2);
    EXPECT_NEAR(m2.kp(), 2 / std::sqrt(2.0), 1e-15);
    EXPECT_DOUBLE_EQ(m2.ks(), 2.0);
}

TEST(Medium, Invalid)
{
    EXPECT_KIND(make_medium(-2, 1, 1, 1), ErrorKind::InvalidMedium);
    EXPECT_KIND(make_medium(1, 0, 1, 1), ErrorKind::InvalidMedium);
    EXPECT_KIND(make_medium(1, 1, -1, 1), ErrorKind::InvalidMedium);
    EXPECT_KIND(make_medium(1, 1, 1, 0), ErrorKind::InvalidMedium);
    EXPECT_KIND(make_medium(1, 1, 1, 1, -0.1), ErrorKind::InvalidMedium);
}

TEST(Medium, ComplexFrequency)
{
    auto m = make_medium(2, 1, 1, 1, 0.1);
    EXPECT_TRUE(m.damped());
    EXPECT_NEAR(std::abs(m.kp_c() - cdouble(0.5, 0.05)), 0.0, 1e-15);
    EXPECT_GT(m.ks_c().imag(), 0.0);
}

TEST(ClassifyMode, Examples)
{
    auto m = make_medium(2, 1, 1, 1);
    auto d = classify_mode(m, qp2d(0.3), 0);
    EXPECT_DOUBLE_EQ(d.alpha_l, 0.3);
    EXPECT_NEAR(d.beta.real(), 0.4, 1e-15);
    EXPECT_EQ(d.beta.imag(), 0.0);
    EXPECT_EQ(d.cls, ModeClass::L1);

    auto d1 = classify_mode(m, qp2d(0.3), 1);
    EXPECT_NEAR(d1.alpha_l, 0.3 + 2 * pi, 1e-14);
    EXPECT_EQ(d1.cls, ModeClass::L3);
    EXPECT_EQ(d1.beta.real(), 0.0);
    EXPECT_NEAR(d1.beta.imag(), std::sqrt(d1.alpha_l * d1.alpha_l - 0.25), 1e-13);

    EXPECT_KIND(classify_mode(m, qp2d(0.5), 0), ErrorKind::WoodAnomaly);
    EXPECT_KIND(classify_mode(m, qp2d(1.0), 0), ErrorKind::WoodAnomaly);
}

TEST(ClassifyMode, MiddleClass)
{
    auto m = make_medium(2, 1, 1, 1);
    auto d = classify_mode(m, qp2d(0.7), 0);
    EXPECT_EQ(d.cls, ModeClass::L2);
    EXPECT_EQ(d.beta.real(), 0.0);
    EXPECT_GT(d.beta.imag(), 0.0);
    EXPECT_GT(d.gamma.real(), 0.0);
}

TEST(ClassifyMode, MirrorSymmetry)
{
    auto m = make_medium(1.3, 0.7, 1.1, 9.0);
    for (double a : {0.2, 1.1, -2.5})
        for (int l = -3; l <= 3; ++l) {
            auto d = classify_mode(m, qp2d(a), l);
            auto e = classify_mode(m, qp2d(-a), -l);
            EXPECT_EQ(e.alpha_l, -d.alpha_l);
            EXPECT_EQ(e.beta, d.beta);
            EXPECT_EQ(e.gamma, d.gamma);
            EXPECT_EQ(e.cls, d.cls);
        }
}

TEST(ClassifyMode, UpwardRoots)
{
    auto m = make_medium(1, 1, 1, 5);
    for (int l = -4; l <= 4; ++l) {
        auto d = classify_mode(m, qp2d(0.37), l);
        EXPECT_GE(d.beta.imag(), 0.0);
        EXPECT_GE(d.gamma.imag(), 0.0);
        EXPECT_GE(d.beta.real(), 0.0);
        EXPECT_NEAR(std::abs(d.beta * d.beta + d.alpha_l * d.alpha_l - m.kp() * m.kp()), 0.0, 1e-12);
    }
}

TEST(ListModes, Propagating)
{
    auto m = make_medium(2, 1, 1, 1);
    auto a = list_modes(m, qp2d(0.0), ModeCriterion::all_propagating());
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].m, 0);

    auto big = make_medium(2, 1, 1, 14); // kp = 7, ks = 14
    auto b = list_modes(big, qp2d(0.0), ModeCriterion::all_propagating());
    std::vector<int> ms;
    int p = 0;
    for (auto& d : b) {
        ms.push_back(d.m);
        p += d.cls == ModeClass::L1;
    }
    EXPECT_EQ(ms, (std::vector<int>{-2, -1, 0, 1, 2}));
    EXPECT_EQ(p, 3);
}

TEST(ListModes, TailBoundGrowsLogarithmically)
{
    auto m = make_medium(2, 1, 1, 1);
    auto n8 = list_modes(m, qp2d(0.1), ModeCriterion::tail_bound(1.0, 1e-8)).size();
    auto n16 = list_modes(m, qp2d(0.1), ModeCriterion::tail_bound(1.0, 1e-16)).size();
    EXPECT_GT(n16, n8);
    EXPECT_LE(n16, 2 * std::ceil(std::log(1e16) / two_pi) + 3);
    for (auto& d : list_modes(m, qp2d(0.1), ModeCriterion::tail_bound(1.0, 1e-16)))
        EXPECT_GE(std::exp(-d.gamma.imag()), 1e-16);
    EXPECT_KIND(list_modes(m, qp2d(0.1), ModeCriterion::tail_bound(0.0, 1e-8)), ErrorKind::DomainError);
}

TEST(ListModes, MirrorSet)
{
    auto m = make_medium(1, 1, 1, 6);
    auto a = list_modes(m, qp2d(0.4), ModeCriterion::tail_bound(0.3, 1e-12));
    auto b = list_modes(m, qp2d(-0.4), ModeCriterion::tail_bound(0.3, 1e-12));
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i)
        EXPECT_EQ(a[i].alpha_l, -b[b.size() - 1 - i].alpha_l);
}

TEST(ListModes, Biperiodic)
{
    auto m = make_medium(2, 1, 1, 7);
    auto a = list_modes_bi(m, biqp(0.1, -0.2), ModeCriterion::all_propagating());
    for (auto& d : a)
        EXPECT_LT(d.alpha_sq(), m.ks() * m.ks());
    EXPECT_GE(a.size(), 5u);
}

TEST(Sign, ZeroIsZero)
{
    EXPECT_EQ(sgn(0.0), 0.0);
    EXPECT_EQ(sgn(-3.0), -1.0);
    EXPECT_EQ(sgn(2.0), 1.0);
}
