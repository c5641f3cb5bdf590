#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include <boost/math/special_functions/bessel.hpp>

#include "errors.hpp"
#include "medium.hpp"

namespace lamegf {

// Real-argument kernels delegate to Boost.Math; the complex-argument K0/K1 below are
// needed for the analytic continuation to complex frequency and are implemented here.

inline double bessel_j(int n, double x)
{
    if (!std::isfinite(x))
        fail(ErrorKind::DomainError, "bessel_j: non-finite argument");
    if (n < 0)
        return (n % 2 ? -1.0 : 1.0) * boost::math::cyl_bessel_j(-n, x);
    return boost::math::cyl_bessel_j(n, x);
}

inline double bessel_y(int n, double x)
{
    if (!(x > 0.0))
        fail(ErrorKind::DomainError, "bessel_y: x must be positive");
    if (n < 0)
        return (n % 2 ? -1.0 : 1.0) * boost::math::cyl_neumann(-n, x);
    return boost::math::cyl_neumann(n, x);
}

inline cdouble hankel1(int m, double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        fail(ErrorKind::DomainError, "hankel1: x must be positive");
    return {bessel_j(m, x), bessel_y(m, x)};
}

inline cdouble hankel1_deriv(int m, double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        fail(ErrorKind::DomainError, "hankel1_deriv: x must be positive");
    return hankel1(m - 1, x) - (static_cast<double>(m) / x) * hankel1(m, x);
}

inline double mod_k(int nu, double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        fail(ErrorKind::DomainError, "mod_k: x must be positive");
    if (nu < 0)
        nu = -nu;
    if (x > 700.0)
        return 0.0;
    return boost::math::cyl_bessel_k(nu, x);
}

inline double mod_k_deriv(int nu, double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        fail(ErrorKind::DomainError, "mod_k_deriv: x must be positive");
    return -mod_k(nu - 1, x) - (static_cast<double>(nu) / x) * mod_k(nu, x);
}

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

inline std::pair<cdouble, cdouble> k01_series(cdouble z)
{
    const cdouble t = 0.25 * z * z;
    const cdouble lg = std::log(0.5 * z);
    cdouble i0 = 0.0, s0 = 0.0, i1 = 0.0, s1 = 0.0;
    cdouble tk = 1.0;     // t^k / (k!)^2
    cdouble tk1 = 1.0;    // t^k / (k!(k+1)!)
    double hk = 0.0;      // harmonic number H_k
    for (int k = 0; k < 60; ++k) {
        const double hk1 = hk + 1.0 / (k + 1);
        i0 += tk;
        s0 += hk * tk;
        i1 += tk1;
        s1 += (2.0 * (-euler_gamma) + hk + hk1) * tk1;
        if (std::abs(tk) < 1e-18 * std::abs(i0) && k > 2)
            break;
        tk *= t / double((k + 1) * (k + 1));
        tk1 *= t / double((k + 1) * (k + 2));
        hk = hk1;
    }
    const cdouble k0 = -(lg + euler_gamma) * i0 + s0;
    const cdouble I1 = 0.5 * z * i1;
    const cdouble k1 = 1.0 / z + lg * I1 - 0.25 * z * s1;
    return {k0, k1};
}

// Steed's continued fraction for K_0, K_1 (Temme / Thompson-Barnett form).
inline std::pair<cdouble, cdouble> k01_cf(cdouble z)
{
    cdouble b = 2.0 * (1.0 + z);
    cdouble d = 1.0 / b;
    cdouble h = d, delh = d;
    cdouble q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25;
    cdouble q = a1, c = a1;
    double a = -a1;
    cdouble s = 1.0 + q * delh;
    for (int i = 1; i < 100000; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const cdouble qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const cdouble dels = q * delh;
        s += dels;
        if (std::abs(dels) < 1e-17 * std::abs(s))
            break;
    }
    h = a1 * h;
    const cdouble k0 = std::sqrt(pi / (2.0 * z)) * std::exp(-z) / s;
    const cdouble k1 = k0 * (z + 0.5 - h) / z;
    return {k0, k1};
}

} // namespace detail

// K_0(z), K_1(z) for Re z >= 0, z != 0.
inline std::pair<cdouble, cdouble> mod_k01(cdouble z)
{
    if (z == cdouble(0.0) || z.real() < -1e-14 * std::abs(z))
        fail(ErrorKind::DomainError, "mod_k01: argument outside the closed right half plane");
    if (std::abs(z) <= 2.0)
        return detail::k01_series(z);
    return detail::k01_cf(z);
}

// H_0^(1)(z), H_1^(1)(z) for Im z >= 0, z != 0.
inline std::pair<cdouble, cdouble> hankel01(cdouble z)
{
    auto [k0, k1] = mod_k01(-I * z);
    return {(2.0 / (pi * I)) * k0, (-2.0 / pi) * k1};
}

} // namespace lamegf
