#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "errors.hpp"
#include "fd.hpp"
#include "green2d.hpp"
#include "medium.hpp"
#include "specfun.hpp"
#include "types.hpp"

namespace lamegf {

inline constexpr double default_gap_min_3d = 1e-2;

// Case numbering follows the case tables: I evanescent, II s-propagating only, III both.
enum class Case3D { I, II, III, Unified };

// c is in the mode-table normalization: (Lbar_l + rho omega^2) c_l = delta_0 I / (2 pi).
struct FourierMode3QP {
    ModeData mode;
    Mat3 c;
    double r = 0.0;
    Case3D case_used = Case3D::Unified;
};

namespace detail {

// phi(r) = (i/4) H0(q r), q = sqrt_up(k^2 - a^2): value, gradient and Hessian in (x2, x3).
struct Potential2D {
    cdouble phi;
    cdouble d[2];
    cdouble dd[2][2];
};

inline Potential2D helmholtz_pot(cdouble k, double a, double x2, double x3)
{
    const double r = std::hypot(x2, x3);
    const double xs[2] = {x2, x3};
    const cdouble q = sqrt_up(k * k - a * a);
    auto [h0, h1] = hankel01(q * r);
    Potential2D P;
    P.phi = 0.25 * I * h0;
    for (int j = 0; j < 2; ++j) {
        P.d[j] = -0.25 * I * q * h1 * xs[j] / r;
        for (int m = 0; m < 2; ++m)
            P.dd[j][m] = 0.25 * I *
                         (-q * q * h0 * xs[j] * xs[m] / (r * r) + q * h1 * (2.0 * xs[j] * xs[m] / (r * r * r) - (j == m ? 1.0 : 0.0) / r));
    }
    return P;
}

// Unified mode block in Kupradze normalization: (1/mu) phi_s I + (1/rho w^2) D D^T (phi_s - phi_p),
// D = (i a, d2, d3).
inline Mat3 mode_block_3qp(const ElasticMedium& med, double a, double x2, double x3)
{
    const Potential2D S = helmholtz_pot(med.ks_c(), a, x2, x3);
    const Potential2D P = helmholtz_pot(med.kp_c(), a, x2, x3);
    const cdouble f = 1.0 / med.rho_omega2();
    Mat3 M;
    M(0, 0) = S.phi / med.mu - f * a * a * (S.phi - P.phi);
    for (int j = 0; j < 2; ++j) {
        M(0, j + 1) = M(j + 1, 0) = f * I * a * (S.d[j] - P.d[j]);
        for (int m = 0; m < 2; ++m)
            M(j + 1, m + 1) = f * (S.dd[j][m] - P.dd[j][m]) + (j == m ? S.phi / med.mu : cdouble(0.0));
    }
    return M;
}

// Case tables with real special functions, mode-table normalization.  Signs and powers of
// r in Cases II and III are checked against the quadrature oracle and the ODE residual.
inline Mat3 c_literal_3qp(const ElasticMedium& med, double a, double x2, double x3)
{
    const double r = std::hypot(x2, x3);
    const double ks2 = med.ks() * med.ks(), kp2 = med.kp() * med.kp(), mu = med.mu;
    const double rw2 = med.rho_omega2().real();
    const double gs = std::sqrt(std::abs(ks2 - a * a)), gp = std::sqrt(std::abs(kp2 - a * a));
    const double P2 = 4.0 * pi * pi;
    const double x22 = x2 * x2, x33 = x3 * x3, r2 = r * r;
    Mat3 c;
    if (a * a >= ks2) {
        const double K0s = mod_k(0, gs * r), K1s = mod_k(1, gs * r), K0p = mod_k(0, gp * r), K1p = mod_k(1, gp * r);
        c(0, 0) = gs * gs * K0s / (P2 * rw2) - a * a * K0p / (P2 * rw2);
        c(1, 0) = I * a * x2 / (P2 * rw2 * r) * (gs * K1s - gp * K1p);
        c(2, 0) = I * a * x3 / (P2 * rw2 * r) * (gs * K1s - gp * K1p);
        c(1, 1) = -K0s / (P2 * mu) + 1.0 / (P2 * rw2 * r2) *
                                         (gs * ((x33 - x22) / r * K1s - x22 * gs * K0s) -
                                          gp * ((x33 - x22) / r * K1p - x22 * gp * K0p));
        c(2, 1) = x2 * x3 / (P2 * rw2 * r2) * (2.0 / r * gp * K1p + gp * gp * K0p - 2.0 / r * gs * K1s - gs * gs * K0s);
        c(2, 2) = -K0s / (P2 * mu) + 1.0 / (P2 * rw2 * r2) *
                                         (gs * ((x22 - x33) / r * K1s - x33 * gs * K0s) -
                                          gp * ((x22 - x33) / r * K1p - x33 * gp * K0p));
    } else if (a * a >= kp2) {
        const cdouble H0 = hankel1(0, gs * r), H1 = hankel1(1, gs * r);
        const double K0p = mod_k(0, gp * r), K1p = mod_k(1, gp * r);
        c(0, 0) = -I * gs * gs / (8.0 * pi * rw2) * H0 - a * a / (P2 * rw2) * K0p;
        c(1, 0) = a * x2 / (P2 * rw2 * r) * (-pi / 2.0 * gs * H1 - I * gp * K1p);
        c(2, 0) = a * x3 / (P2 * rw2 * r) * (-pi / 2.0 * gs * H1 - I * gp * K1p);
        c(1, 1) = -I / (8.0 * pi * mu) * H0 -
                  1.0 / (P2 * rw2) *
                      (gp / r2 * ((x33 - x22) / r * K1p - x22 * gp * K0p) -
                       pi * I * gs / (2.0 * r2) * ((x33 - x22) / r * H1 + x22 * gs * H0));
        c(2, 1) = x2 * x3 / (P2 * rw2 * r) *
                  (pi * I * gs / (2.0 * r) * (gs * H0 - 2.0 / r * H1) + gp / r * (2.0 / r * K1p + gp * K0p));
        c(2, 2) = -I / (8.0 * pi * mu) * H0 -
                  1.0 / (P2 * rw2) *
                      (gp / r2 * ((x22 - x33) / r * K1p - x33 * gp * K0p) -
                       pi * I * gs / (2.0 * r2) * ((x22 - x33) / r * H1 + x33 * gs * H0));
    } else {
        const cdouble H0s = hankel1(0, gs * r), H1s = hankel1(1, gs * r);
        const cdouble H0p = hankel1(0, gp * r), H1p = hankel1(1, gp * r);
        const double e8 = 8.0 * pi * rw2;
        c(0, 0) = -I / e8 * (gs * gs * H0s + a * a * H0p);
        c(1, 0) = -a * x2 / (e8 * r) * (gs * H1s - gp * H1p);
        c(2, 0) = -a * x3 / (e8 * r) * (gs * H1s - gp * H1p);
        c(1, 1) = -I / (8.0 * pi * mu) * H0s + I / (e8 * r2) *
                                                   (gs * ((x33 - x22) / r * H1s + x22 * gs * H0s) -
                                                    gp * ((x33 - x22) / r * H1p + x22 * gp * H0p));
        c(2, 1) = I * x2 * x3 / (e8 * r2) * (gs * (gs * H0s - 2.0 / r * H1s) - gp * (gp * H0p - 2.0 / r * H1p));
        c(2, 2) = -I / (8.0 * pi * mu) * H0s + I / (e8 * r2) *
                                                   (gs * ((x22 - x33) / r * H1s + x33 * gs * H0s) -
                                                    gp * ((x22 - x33) / r * H1p + x33 * gp * H0p));
    }
    c(0, 1) = c(1, 0);
    c(0, 2) = c(2, 0);
    c(1, 2) = c(2, 1);
    return c;
}

// sqrt(pi/2z) e^{-z} (1 + 1/z) dominates K0 and K1.
inline double k_envelope(double z) { return std::sqrt(pi / (2.0 * z)) * std::exp(-z) * (1.0 + 1.0 / z); }

inline double block_bound_3qp(const ElasticMedium& med, double a, double r)
{
    const cdouble ks = med.ks_c();
    const double b = sqrt_up(ks * ks - a * a).imag();
    if (!(b > 0.0))
        return std::numeric_limits<double>::infinity();
    const double poly = 1.0 / med.mu + 2.0 * (a * a + std::abs(a) * b + b * b + 3.0 * b / r) / std::abs(med.rho_omega2());
    return poly * k_envelope(b * r) / two_pi;
}

// Sum of per-mode bounds for alpha_l = a0, a0 + step, ...
inline double tail_sum(const std::function<double(double)>& bound, double a0, double step, double gap)
{
    const double A = std::abs(a0);
    const double ratio = std::pow(1.0 + two_pi / A, 2) * std::exp(-two_pi * gap);
    const double b0 = bound(a0);
    if (b0 == 0.0)
        return 0.0;
    if (ratio < 0.9)
        return b0 / (1.0 - ratio);
    double s = 0.0;
    for (int j = 0; j < 10000000; ++j) {
        const double bj = bound(a0 + j * step);
        s += bj;
        if (bj < 1e-20 * s && j > 10)
            return s * (1.0 + 1e-12);
    }
    return std::numeric_limits<double>::infinity();
}

} // namespace detail

inline FourierMode3QP c_l(const ElasticMedium& med, const QuasiMomentum& q, int m, double x2, double x3,
                          Form form = Form::Literal, double tol_wood = default_tol_wood)
{
    const double r = std::hypot(x2, x3);
    if (!(r > 0.0))
        fail(ErrorKind::DomainError, "c_l: r must be positive");
    FourierMode3QP out;
    out.mode = classify_mode(med, q, m, tol_wood);
    out.r = r;
    const double a = out.mode.alpha_l;
    if (form == Form::Unified) {
        out.c = -detail::mode_block_3qp(med, a, x2, x3) / two_pi;
        out.case_used = Case3D::Unified;
        return out;
    }
    if (med.damped())
        fail(ErrorKind::DomainError, "c_l: case tables need a real frequency");
    out.c = detail::c_literal_3qp(med, a, x2, x3);
    out.case_used = out.mode.cls == ModeClass::L3 ? Case3D::I : out.mode.cls == ModeClass::L2 ? Case3D::II : Case3D::III;
    return out;
}

// Max-norm residual of the mode ODE system applied to c_l by 4th-order differences; the
// right-hand side vanishes away from the origin.
inline double ode_residual(const ElasticMedium& med, const QuasiMomentum& q, int m, double x2, double x3, double h,
                           Form form = Form::Literal)
{
    const double r = std::hypot(x2, x3);
    if (!(r > 2.0 * h))
        fail(ErrorKind::DomainError, "ode_residual: need r > 2h");
    const double a = q.alpha + two_pi * m;
    auto f = [&](double u, double v) { return c_l(med, q, m, u, v, form).c; };
    Mat3 C[5][5];
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const bool needed = (i == 2 || j == 2 || (i != 2 && j != 2));
            if (needed)
                C[i][j] = f(x2 + (i - 2) * h, x3 + (j - 2) * h);
        }
    auto d2 = [&](int dir) {
        Mat3 s = Mat3::Zero();
        for (int k = 0; k < 5; ++k)
            s += fd::c2[k] * (dir == 0 ? C[k][2] : C[2][k]);
        return Mat3(s / (h * h));
    };
    auto d1 = [&](int dir) {
        Mat3 s = Mat3::Zero();
        for (int k = 0; k < 5; ++k)
            s += fd::c1[k] * (dir == 0 ? C[k][2] : C[2][k]);
        return Mat3(s / h);
    };
    Mat3 d23 = Mat3::Zero();
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (fd::c1[i] != 0.0 && fd::c1[j] != 0.0)
                d23 += fd::c1[i] * fd::c1[j] * C[i][j];
    d23 /= h * h;
    const Mat3 c = C[2][2], c2 = d1(0), c3 = d1(1), c22 = d2(0), c33 = d2(1);
    const double lam = med.lambda, mu = med.mu;
    const cdouble rw2 = med.rho_omega2();
    Mat3 R;
    for (int j = 0; j < 3; ++j) {
        R(0, j) = (rw2 - (lam + 2 * mu) * a * a) * c(0, j) + mu * (c22(0, j) + c33(0, j)) +
                  I * (lam + mu) * a * (c2(1, j) + c3(2, j));
        R(1, j) = I * (lam + mu) * a * c2(0, j) + (rw2 - mu * a * a) * c(1, j) + (lam + 2 * mu) * c22(1, j) +
                  mu * c33(1, j) + (lam + mu) * d23(2, j);
        R(2, j) = I * (lam + mu) * a * c3(0, j) + (lam + mu) * d23(1, j) + (rw2 - mu * a * a) * c(2, j) +
                  mu * c22(2, j) + (lam + 2 * mu) * c33(2, j);
    }
    return R.cwiseAbs().maxCoeff();
}

struct Green3DOptions {
    double tol = 1e-12;
    double gap_min = default_gap_min_3d;
    double tol_wood = default_tol_wood;
};

// Quasi-periodic (in x1) Green tensor, (L + rho omega^2) G = -sum_n e^{i n alpha} delta(x - y - n e1).
inline GreenEval green3dqp_eval(const ElasticMedium& med, const QuasiMomentum& q, const Vec3& x, const Vec3& y,
                                const Green3DOptions& opt = {})
{
    const double t2 = x(1) - y(1), t3 = x(2) - y(2);
    const double r = std::hypot(t2, t3);
    if (!(r >= opt.gap_min))
        fail(ErrorKind::NearSourceLine, "transverse distance " + std::to_string(r) + " is below gap_min");
    auto modes = list_modes(med, q, ModeCriterion::tail_bound(r, opt.tol), opt.tol_wood);
    CompensatedSum<3, 3> acc;
    const double dx1 = x(0) - y(0);
    for (const auto& d : modes)
        acc.add(std::exp(I * (d.alpha_l * dx1)) * detail::mode_block_3qp(med, d.alpha_l, t2, t3));
    GreenEval out;
    out.dim = 3;
    out.value = acc.value();
    out.modes_used = static_cast<int>(modes.size());
    if (modes.empty()) {
        out.tail_bound = std::numeric_limits<double>::infinity();
    } else {
        auto bound = [&](double a) { return detail::block_bound_3qp(med, a, r); };
        out.tail_bound = detail::tail_sum(bound, q.alpha + two_pi * (modes.front().m - 1), -two_pi, r) +
                         detail::tail_sum(bound, q.alpha + two_pi * (modes.back().m + 1), two_pi, r);
    }
    return out;
}

inline GreenEval green3dqp_eval(const ElasticMedium& med, const QuasiMomentum& q, const Vec3& x, const Vec3& y,
                                double tol)
{
    Green3DOptions o;
    o.tol = tol;
    return green3dqp_eval(med, q, x, y, o);
}

} // namespace lamegf
