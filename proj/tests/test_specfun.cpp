#include <cmath>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <lamegf/specfun.hpp>

#include "testing.hpp"

using namespace lamegf;

namespace {
double rel(cdouble a, cdouble b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST(Specfun, BesselJ)
{
    EXPECT_EQ(bessel_j(0, 0.0), 1.0);
    EXPECT_EQ(bessel_j(1, 0.0), 0.0);
    EXPECT_NEAR(bessel_j(0, 1.0), 0.765197686557967, 1e-15);
}

TEST(Specfun, Hankel)
{
    EXPECT_LT(rel(hankel1(0, 2.0), cdouble(0.223890779141236, 0.510375672649745)), 1e-13);
    EXPECT_LT(rel(hankel1(1, 2.0), cdouble(0.576724807756873, -0.107032431540938)), 1e-13);
    EXPECT_KIND(hankel1(0, 0.0), ErrorKind::DomainError);
    EXPECT_KIND(bessel_y(0, -1.0), ErrorKind::DomainError);
}

TEST(Specfun, ModifiedK)
{
    EXPECT_NEAR(mod_k(0, 1.0), 0.421024438240708, 1e-14);
    EXPECT_NEAR(mod_k(1, 1.0), 0.601907230197235, 1e-14);
    EXPECT_LT(mod_k(0, 50.0), 1e-20);
    EXPECT_GT(mod_k(0, 50.0), 0.0);
    EXPECT_KIND(mod_k(0, 0.0), ErrorKind::DomainError);
    double prev = mod_k(2, 0.01);
    for (double x = 0.02; x < 30; x *= 1.3) {
        const double v = mod_k(2, x);
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(Specfun, KDerivative)
{
    EXPECT_NEAR(mod_k_deriv(1, 1.0), -1.022931668437943, 1e-14);
    const double h = 1e-5;
    const double fd = (mod_k(1, 1 + h) - mod_k(1, 1 - h)) / (2 * h);
    EXPECT_NEAR(mod_k_deriv(1, 1.0), fd, 1e-8);
    EXPECT_LT(mod_k_deriv(1, 40.0), 0.0);
    EXPECT_GT(mod_k_deriv(1, 40.0), -1e-16);
    EXPECT_KIND(mod_k_deriv(1, 0.0), ErrorKind::DomainError);
}

TEST(Specfun, HankelDerivative)
{
    EXPECT_EQ(hankel1_deriv(0, 2.0), -hankel1(1, 2.0));
    const double h = 1e-5;
    const cdouble fd = (hankel1(1, 2 + h) - hankel1(1, 2 - h)) / (2 * h);
    EXPECT_LT(std::abs(hankel1_deriv(1, 2.0) - fd), 1e-8);
    EXPECT_KIND(hankel1_deriv(0, 0.0), ErrorKind::DomainError);
}

TEST(Specfun, Wronskians)
{
    for (double x = 1e-3; x < 1e3; x *= 1.7) {
        const double w = bessel_j(1, x) * bessel_y(0, x) - bessel_j(0, x) * bessel_y(1, x);
        EXPECT_LT(std::abs(w - 2 / (pi * x)) * (pi * x / 2), 1e-10) << x;
        const double wk = mod_k(1, x) * std::cyl_bessel_i(0, x) + mod_k(0, x) * std::cyl_bessel_i(1, x);
        if (x < 600) {
            EXPECT_LT(std::abs(wk * x - 1.0), 1e-10) << x;
        }
    }
}

TEST(Specfun, IndependentLibraryAgreement)
{
    // libstdc++ drifts to ~1e-12 past x ~ 300, so the reference is 50-digit boost
    using B = boost::multiprecision::cpp_bin_float_50;
    for (int n = 0; n <= 3; ++n)
        for (double x = 1e-2; x < 1e3; x *= 1.9) {
            const double h = std::abs(hankel1(n, x));
            const double J = static_cast<double>(boost::math::cyl_bessel_j(n, B(x)));
            const double Y = static_cast<double>(boost::math::cyl_neumann(n, B(x)));
            EXPECT_LT(std::abs(bessel_j(n, x) - J) / h, 1e-13) << n << " " << x;
            EXPECT_LT(std::abs(bessel_y(n, x) - Y) / h, 1e-13) << n << " " << x;
            EXPECT_LT(std::abs(bessel_j(n, x) - std::cyl_bessel_j(n, x)) / h, 1e-11);
            if (x < 500) {
                const double K = static_cast<double>(boost::math::cyl_bessel_k(n, B(x)));
                EXPECT_LT(std::abs(mod_k(n, x) / K - 1.0), 1e-13) << n << " " << x;
                EXPECT_LT(std::abs(mod_k(n, x) / std::cyl_bessel_k(n, x) - 1.0), 1e-12);
            }
        }
}

TEST(Specfun, ComplexKMatchesRealAxis)
{
    for (double x : {1e-3, 0.5, 1.9, 2.1, 7.0, 30.0}) {
        auto [k0, k1] = mod_k01(cdouble(x, 0.0));
        EXPECT_LT(std::abs(k0 / mod_k(0, x) - 1.0), 1e-13) << x;
        EXPECT_LT(std::abs(k1 / mod_k(1, x) - 1.0), 1e-13) << x;
        auto [h0, h1] = hankel01(cdouble(x, 0.0));
        EXPECT_LT(rel(h0, hankel1(0, x)), 1e-12) << x;
        EXPECT_LT(rel(h1, hankel1(1, x)), 1e-12) << x;
    }
}

TEST(Specfun, ComplexKConjugateSymmetryAndRecurrence)
{
    for (double r : {0.3, 1.5, 2.5, 9.0})
        for (double th : {-1.2, 0.4, 1.5}) {
            const cdouble z = std::polar(r, th);
            auto [a0, a1] = mod_k01(z);
            auto [b0, b1] = mod_k01(std::conj(z));
            EXPECT_LT(rel(b0, std::conj(a0)), 1e-14);
            EXPECT_LT(rel(b1, std::conj(a1)), 1e-14);
            // K0' = -K1 by central difference along the ray
            const cdouble h = std::polar(1e-5, th);
            const cdouble d = (mod_k01(z + h).first - mod_k01(z - h).first) / (2.0 * h);
            EXPECT_LT(rel(d, -a1), 1e-8);
        }
    EXPECT_KIND(mod_k01(cdouble(0, 0)), ErrorKind::DomainError);
    EXPECT_KIND(mod_k01(cdouble(-1, 0.1)), ErrorKind::DomainError);
}
