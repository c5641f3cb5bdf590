#pragma once

#include <array>
#include <cmath>

#include "errors.hpp"
#include "medium.hpp"
#include "specfun.hpp"
#include "types.hpp"

namespace lamegf {

// Free-space time-harmonic Kupradze tensors, normalized so that
// (Delta^* + rho omega^2) G(., y) = -delta_y I.

// Radial coefficients of Gamma = phi1 I + phi2 xhat xhat^T in 2D, plus r-derivatives.
struct Radial2D {
    cdouble phi1, phi2, dphi1, dphi2;
};

inline Radial2D kupradze2d_radial(const ElasticMedium& med, double r)
{
    const cdouble ks = med.ks_c(), kp = med.kp_c(), rw2 = med.rho_omega2();
    auto [h0s, h1s] = hankel01(ks * r);
    auto [h0p, h1p] = hankel01(kp * r);
    const cdouble F = ks * h1s - kp * h1p;
    const cdouble E = ks * ks * h0s - kp * kp * h0p;
    const cdouble a = I / (4.0 * med.mu), b = I / (4.0 * rw2);
    Radial2D R;
    R.phi1 = a * h0s - b * F / r;
    R.phi2 = b * (-E + 2.0 * F / r);
    R.dphi1 = -a * ks * h1s - b * (E / r - 2.0 * F / (r * r));
    R.dphi2 = b * (ks * ks * ks * h1s - kp * kp * kp * h1p + 2.0 * E / r - 4.0 * F / (r * r));
    return R;
}

inline Mat2 kupradze2d(const ElasticMedium& med, const Vec2& x, const Vec2& y)
{
    const Vec2 d = x - y;
    const double r = d.norm();
    if (r == 0.0)
        fail(ErrorKind::CoincidentPoints, "kupradze2d: x == y");
    const Radial2D R = kupradze2d_radial(med, r);
    const Vec2 e = d / r;
    return R.phi1 * Mat2::Identity() + R.phi2 * (e * e.transpose()).cast<cdouble>();
}

// Value and x-gradient: dG[k](i,j) = d/dx_k G_ij.
struct Jet2 {
    Mat2 G;
    std::array<Mat2, 2> dG;
};

inline Jet2 kupradze2d_jet(const ElasticMedium& med, const Vec2& x, const Vec2& y)
{
    const Vec2 d = x - y;
    const double r = d.norm();
    if (r == 0.0)
        fail(ErrorKind::CoincidentPoints, "kupradze2d_jet: x == y");
    const Radial2D R = kupradze2d_radial(med, r);
    const cdouble psi2 = R.phi2 / (r * r);
    const cdouble dpsi2 = R.dphi2 / (r * r) - 2.0 * R.phi2 / (r * r * r);
    Jet2 J;
    J.G = R.phi1 * Mat2::Identity() + psi2 * (d * d.transpose()).cast<cdouble>();
    for (int k = 0; k < 2; ++k) {
        Mat2 M = (R.dphi1 * d(k) / r) * Mat2::Identity() + (dpsi2 * d(k) / r) * (d * d.transpose()).cast<cdouble>();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                M(i, j) += psi2 * ((i == k ? d(j) : 0.0) + (j == k ? d(i) : 0.0));
        J.dG[k] = M;
    }
    return J;
}

inline Mat3 kupradze3d(const ElasticMedium& med, const Vec3& x, const Vec3& y)
{
    const Vec3 d = x - y;
    const double r = d.norm();
    if (r == 0.0)
        fail(ErrorKind::CoincidentPoints, "kupradze3d: x == y");
    const cdouble ks = med.ks_c(), kp = med.kp_c(), rw2 = med.rho_omega2();
    const cdouble es = std::exp(I * ks * r), ep = std::exp(I * kp * r);
    // g = (e_s - e_p)/r and its radial derivatives
    const cdouble g1 = (I * ks * es - I * kp * ep) / r - (es - ep) / (r * r);
    const cdouble g2 = (-ks * ks * es + kp * kp * ep) / r - 2.0 * (I * ks * es - I * kp * ep) / (r * r) +
                       2.0 * (es - ep) / (r * r * r);
    const cdouble psi1 = es / (4.0 * pi * med.mu * r) + g1 / (4.0 * pi * rw2 * r);
    const cdouble psi2 = (g2 - g1 / r) / (4.0 * pi * rw2);
    const Vec3 e = d / r;
    return psi1 * Mat3::Identity() + psi2 * (e * e.transpose()).cast<cdouble>();
}

inline GreenEval kupradze(const ElasticMedium& med, const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    if (x.size() != y.size() || (x.size() != 2 && x.size() != 3))
        fail(ErrorKind::DomainError, "kupradze: points must both be 2D or 3D");
    GreenEval out;
    out.dim = static_cast<int>(x.size());
    if (out.dim == 2)
        out.value = kupradze2d(med, Vec2(x), Vec2(y));
    else
        out.value = kupradze3d(med, Vec3(x), Vec3(y));
    return out;
}

// Number of lattice shells so that exp(-Im(k_p) N) <= 1e-10.
inline int default_lattice_N(const ElasticMedium& med)
{
    const double d = med.kp_c().imag();
    if (!(d > 0.0))
        fail(ErrorKind::DomainError, "lattice_sum needs a damped medium or eps > 0");
    return static_cast<int>(std::ceil(std::log(1e10) / d));
}

// Direct lattice sum  sum_n e^{i alpha.n} Gamma(x, y + n) e^{-eps |n|^2}, ordered by n.
// For eps = 0 the medium must be damped; the result is then the quasi-periodic Green tensor
// at the complexified frequency.  tail_bound estimates the dropped shells geometrically.
inline GreenEval lattice_sum(const ElasticMedium& med, const QuasiMomentum& q, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y, double eps = 0.0, int N = -1)
{
    if (eps < 0.0)
        fail(ErrorKind::DomainError, "lattice_sum: eps must be >= 0");
    if (eps == 0.0 && !med.damped())
        fail(ErrorKind::DomainError, "lattice_sum: undamped sum does not converge");
    if (N < 0)
        N = med.damped() ? default_lattice_N(med) : static_cast<int>(std::ceil(std::sqrt(40.0 / eps)));
    const double decay_rate = med.kp_c().imag();
    GreenEval out;
    double last_shell = 0.0;
    if (q.kind == Geometry::QP2D) {
        if (x.size() != 2 || y.size() != 2)
            fail(ErrorKind::DomainError, "lattice_sum: QP2D needs 2D points");
        CompensatedSum<2, 2> acc;
        for (int n = -N; n <= N; ++n) {
            const Vec2 yn = Vec2(y) + Vec2(n, 0.0);
            const Mat2 t = std::exp(I * (q.alpha * n)) * std::exp(-eps * n * n) * kupradze2d(med, Vec2(x), yn);
            acc.add(t);
            if (std::abs(n) == N)
                last_shell += t.cwiseAbs().maxCoeff();
        }
        out.dim = 2;
        out.value = acc.value();
        out.modes_used = 2 * N + 1;
    } else if (q.kind == Geometry::QP3D) {
        if (x.size() != 3 || y.size() != 3)
            fail(ErrorKind::DomainError, "lattice_sum: QP3D needs 3D points");
        CompensatedSum<3, 3> acc;
        for (int n = -N; n <= N; ++n) {
            const Vec3 yn = Vec3(y) + Vec3(n, 0.0, 0.0);
            const Mat3 t = std::exp(I * (q.alpha * n)) * std::exp(-eps * n * n) * kupradze3d(med, Vec3(x), yn);
            acc.add(t);
            if (std::abs(n) == N)
                last_shell += t.cwiseAbs().maxCoeff();
        }
        out.dim = 3;
        out.value = acc.value();
        out.modes_used = 2 * N + 1;
    } else {
        if (x.size() != 3 || y.size() != 3)
            fail(ErrorKind::DomainError, "lattice_sum: BIQP3D needs 3D points");
        CompensatedSum<3, 3> acc;
        for (int n1 = -N; n1 <= N; ++n1)
            for (int n2 = -N; n2 <= N; ++n2) {
                const Vec3 yn = Vec3(y) + Vec3(n1, n2, 0.0);
                const double nn = double(n1) * n1 + double(n2) * n2;
                const Mat3 t = std::exp(I * (q.alpha * n1 + q.alpha2 * n2)) * std::exp(-eps * nn) *
                               kupradze3d(med, Vec3(x), yn);
                acc.add(t);
                if (std::max(std::abs(n1), std::abs(n2)) == N)
                    last_shell += t.cwiseAbs().maxCoeff();
            }
        out.dim = 3;
        out.value = acc.value();
        out.modes_used = (2 * N + 1) * (2 * N + 1);
    }
    // successive shells shrink at least by exp(-Im k_p) (and by the Gaussian factor)
    double ratio = std::exp(-decay_rate - eps * (2.0 * N + 1.0));
    out.tail_bound = ratio < 1.0 ? last_shell * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
    return out;
}

} // namespace lamegf
