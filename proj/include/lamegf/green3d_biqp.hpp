#pragma once

#include <cmath>
#include <limits>

#include "errors.hpp"
#include "green3d_qp.hpp"
#include "medium.hpp"
#include "types.hpp"

namespace lamegf {

inline constexpr double default_gap_min_bi = 1e-2;

// c in the mode-table normalization: (Lbar_l + rho omega^2) c_l = delta_0 I / (4 pi^2).
// At x3 = 0 the odd entries (13, 23 and transposes) are undefined and set to NaN.
struct FourierMode3BI {
    ModeData mode;
    Mat3 c;
    double x3 = 0.0;
    Case3D case_used = Case3D::Unified;
    bool odd_defined = true;
};

namespace detail {

// phi = i e^{i q |t|} / (2q) and its t-derivatives; (d^2/dt^2 - q^2) phi = -delta.
struct Potential1D {
    cdouble phi, d1, d2;
};

inline Potential1D pot1d(cdouble k, double a_sq, double t)
{
    const cdouble q = sqrt_up(k * k - a_sq);
    const cdouble e = std::exp(I * q * std::abs(t));
    return {I * e / (2.0 * q), -0.5 * sgn(t) * e, -0.5 * I * q * e};
}

// Kupradze-normalized block: (1/mu) phi_s I + (1/rho w^2) D D^T (phi_s - phi_p), D = (i a1, i a2, d3).
inline Mat3 mode_block_bi(const ElasticMedium& med, double a1, double a2, double t)
{
    const double asq = a1 * a1 + a2 * a2;
    const Potential1D S = pot1d(med.ks_c(), asq, t), P = pot1d(med.kp_c(), asq, t);
    const cdouble f = 1.0 / med.rho_omega2();
    const cdouble d0 = S.phi - P.phi, d1 = S.d1 - P.d1, d2 = S.d2 - P.d2;
    const double a[2] = {a1, a2};
    Mat3 M;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j)
            M(i, j) = -f * a[i] * a[j] * d0 + (i == j ? S.phi / med.mu : cdouble(0.0));
        M(i, 2) = M(2, i) = f * I * a[i] * d1;
    }
    M(2, 2) = S.phi / med.mu + f * d2;
    return M;
}

// Case tables.  The sign of the 1/(rho omega^2) bracket in the Case II and III (3,3)
// entries is pinned down by the Fourier oracle in the tests.
inline Mat3 c_literal_bi(const ElasticMedium& med, double a1, double a2, double t)
{
    const double mu = med.mu, rw2 = med.rho_omega2().real();
    const double asq = a1 * a1 + a2 * a2;
    const double ks2 = med.ks() * med.ks(), kp2 = med.kp() * med.kp();
    const double gs = std::sqrt(std::abs(asq - ks2)), gp = std::sqrt(std::abs(asq - kp2));
    const double P8 = 8.0 * pi * pi, at = std::abs(t), s = sgn(t);
    const double a[2] = {a1, a2};
    Mat3 c;
    if (asq >= ks2) {
        const double es = std::exp(-gs * at), ep = std::exp(-gp * at);
        for (int i = 0; i < 2; ++i) {
            c(i, i) = (-es / (mu * gs) + a[i] * a[i] / rw2 * (es / gs - ep / gp)) / P8;
            c(i, 2) = I * a[i] / (P8 * rw2) * s * (es - ep);
        }
        c(0, 1) = a1 * a2 / (P8 * rw2) * (es / gs - ep / gp);
        c(2, 2) = (-es / (mu * gs) + (gp * ep - gs * es) / rw2) / P8;
    } else if (asq >= kp2) {
        const cdouble es = std::exp(I * gs * at);
        const double ep = std::exp(-gp * at);
        for (int i = 0; i < 2; ++i) {
            c(i, i) = (-I * es / (mu * gs) + a[i] * a[i] / rw2 * (I * es / gs - ep / gp)) / P8;
            c(i, 2) = I * a[i] / (P8 * rw2) * s * (es - ep);
        }
        c(0, 1) = a1 * a2 / (P8 * rw2) * (I * es / gs - ep / gp);
        c(2, 2) = (-I * es / (mu * gs) + (gp * ep + I * gs * es) / rw2) / P8;
    } else {
        const cdouble es = std::exp(I * gs * at), ep = std::exp(I * gp * at);
        for (int i = 0; i < 2; ++i) {
            c(i, i) = (-I * es / (mu * gs) + a[i] * a[i] / rw2 * (I * es / gs - I * ep / gp)) / P8;
            c(i, 2) = I * a[i] / (P8 * rw2) * s * (es - ep);
        }
        c(0, 1) = I * a1 * a2 / (P8 * rw2) * (es / gs - ep / gp);
        c(2, 2) = I / P8 * (-es / (mu * gs) + (gs * es - gp * ep) / rw2);
    }
    c(1, 0) = c(0, 1);
    c(2, 0) = c(0, 2);
    c(2, 1) = c(1, 2);
    return c;
}

// Max-norm bound of the Kupradze-normalized block for an evanescent mode with |alpha_l| = rho.
inline double block_bound_bi(const ElasticMedium& med, double rho, double gap)
{
    const cdouble ks = med.ks_c();
    const double b = sqrt_up(ks * ks - rho * rho).imag();
    if (!(b > 0.0))
        return std::numeric_limits<double>::infinity();
    const double poly = 1.0 / (med.mu * b) + 2.0 * (rho * rho / b + 2.0 * rho + std::abs(ks)) / std::abs(med.rho_omega2());
    return 0.5 * poly * std::exp(-b * gap);
}

} // namespace detail

inline FourierMode3BI c_l_bi(const ElasticMedium& med, const QuasiMomentum& q, int m1, int m2, double x3,
                             Form form = Form::Literal, double tol_wood = default_tol_wood)
{
    FourierMode3BI out;
    out.mode = classify_mode_bi(med, q, m1, m2, tol_wood);
    out.x3 = x3;
    const double a1 = out.mode.alpha_l, a2 = out.mode.alpha_l2;
    if (form == Form::Unified) {
        out.c = -detail::mode_block_bi(med, a1, a2, x3) / (4.0 * pi * pi);
        out.case_used = Case3D::Unified;
    } else {
        if (med.damped())
            fail(ErrorKind::DomainError, "c_l_bi: case tables need a real frequency");
        out.c = detail::c_literal_bi(med, a1, a2, x3);
        out.case_used = out.mode.cls == ModeClass::L3 ? Case3D::I : out.mode.cls == ModeClass::L2 ? Case3D::II : Case3D::III;
    }
    if (x3 == 0.0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.c(0, 2) = out.c(2, 0) = out.c(1, 2) = out.c(2, 1) = cdouble(nan, nan);
        out.odd_defined = false;
    }
    return out;
}

// Residual of the biperiodic mode ODE by 4th-order differences in x3.
inline double ode_residual_bi(const ElasticMedium& med, const QuasiMomentum& q, int m1, int m2, double x3, double h,
                              Form form = Form::Literal)
{
    if (!(std::abs(x3) > 2.0 * h))
        fail(ErrorKind::DomainError, "ode_residual_bi: need |x3| > 2h");
    Mat3 C[5];
    for (int k = 0; k < 5; ++k)
        C[k] = c_l_bi(med, q, m1, m2, x3 + (k - 2) * h, form).c;
    Mat3 c1 = Mat3::Zero(), c2 = Mat3::Zero();
    for (int k = 0; k < 5; ++k) {
        c1 += fd::c1[k] * C[k];
        c2 += fd::c2[k] * C[k];
    }
    c1 /= h;
    c2 /= h * h;
    const Mat3& c = C[2];
    const double a1 = q.alpha + two_pi * m1, a2 = q.alpha2 + two_pi * m2;
    const double lam = med.lambda, mu = med.mu;
    const cdouble rw2 = med.rho_omega2();
    Mat3 R;
    for (int j = 0; j < 3; ++j) {
        R(0, j) = (rw2 - (lam + 2 * mu) * a1 * a1 - mu * a2 * a2) * c(0, j) + mu * c2(0, j) -
                  (lam + mu) * a1 * a2 * c(1, j) + I * (lam + mu) * a1 * c1(2, j);
        R(1, j) = -(lam + mu) * a1 * a2 * c(0, j) + (rw2 - (lam + 2 * mu) * a2 * a2 - mu * a1 * a1) * c(1, j) +
                  mu * c2(1, j) + I * (lam + mu) * a2 * c1(2, j);
        R(2, j) = (rw2 - mu * (a1 * a1 + a2 * a2)) * c(2, j) + (lam + 2 * mu) * c2(2, j) +
                  I * (lam + mu) * (a1 * c1(0, j) + a2 * c1(1, j));
    }
    return R.cwiseAbs().maxCoeff();
}

struct GreenBiOptions {
    double tol = 1e-12;
    double gap_min = default_gap_min_bi;
    double tol_wood = default_tol_wood;
};

// Biperiodic Green tensor, (L + rho omega^2) G = -sum_n e^{i alpha.n} delta(x - y - (n1, n2, 0)).
// Modes kept: gamma_s |x3 - y3| <= 35 + log(1/tol) (all propagating modes included).
inline GreenEval greenbi_eval(const ElasticMedium& med, const QuasiMomentum& q, const Vec3& x, const Vec3& y,
                              const GreenBiOptions& opt = {})
{
    const double t = x(2) - y(2), gap = std::abs(t);
    if (!(gap >= opt.gap_min))
        fail(ErrorKind::NearSourcePlane, "|x3 - y3| = " + std::to_string(gap) + " is below gap_min");
    const double L = 35.0 + std::log(1.0 / opt.tol);
    const ModeCriterion crit = ModeCriterion::tail_bound(gap, std::exp(-L));
    const double R = mode_radius(med, crit) + 1e-9;
    const double dx1 = x(0) - y(0), dx2 = x(1) - y(1);
    CompensatedSum<3, 3> acc;
    int used = 0;
    double rho_rejected = R;
    const int lo1 = static_cast<int>(std::ceil((-R - q.alpha) / two_pi));
    const int hi1 = static_cast<int>(std::floor((R - q.alpha) / two_pi));
    for (int m1 = lo1; m1 <= hi1; ++m1) {
        const double a1 = q.alpha + two_pi * m1;
        const double rem = std::sqrt(std::max(0.0, R * R - a1 * a1));
        const int lo2 = static_cast<int>(std::ceil((-rem - q.alpha2) / two_pi));
        const int hi2 = static_cast<int>(std::floor((rem - q.alpha2) / two_pi));
        for (int m2 = lo2; m2 <= hi2; ++m2) {
            const ModeData d = classify_mode_bi(med, q, m1, m2, opt.tol_wood);
            if (!mode_admitted(d, crit)) {
                rho_rejected = std::min(rho_rejected, std::sqrt(d.alpha_sq()));
                continue;
            }
            acc.add(std::exp(I * (d.alpha_l * dx1 + d.alpha_l2 * dx2)) * detail::mode_block_bi(med, d.alpha_l, d.alpha_l2, t));
            ++used;
        }
    }
    GreenEval out;
    out.dim = 3;
    out.value = acc.value();
    out.modes_used = used;
    // shells of width 2 pi beyond the smallest rejected |alpha_l|; lattice count per shell
    // bounded by the area of the shell widened by one cell diagonal
    const double diag = two_pi * std::sqrt(2.0);
    double tail = 0.0;
    for (int j = 0; j < 1000000; ++j) {
        const double r0 = rho_rejected + two_pi * j;
        const double r1 = r0 + two_pi;
        const double inner = std::max(0.0, r0 - diag), outer = r1 + diag;
        const double count = std::ceil((outer * outer - inner * inner) / (4.0 * pi));
        const double b = std::max(detail::block_bound_bi(med, r0, gap), detail::block_bound_bi(med, r1, gap)) *
                         std::pow(1.0 + two_pi / r0, 2);
        const double add = count * b;
        tail += add;
        if (add < 1e-20 * tail || (tail == 0.0 && j > 2))
            break;
    }
    out.tail_bound = tail;
    return out;
}

inline GreenEval greenbi_eval(const ElasticMedium& med, const QuasiMomentum& q, const Vec3& x, const Vec3& y,
                              double tol)
{
    GreenBiOptions o;
    o.tol = tol;
    return greenbi_eval(med, q, x, y, o);
}

} // namespace lamegf
