#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "errors.hpp"

namespace lamegf {

using cdouble = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cdouble I{0.0, 1.0};

// Square root on the branch with Im >= 0 (nonnegative real on the positive axis).
inline cdouble sqrt_up(cdouble z)
{
    cdouble s = std::sqrt(z);
    if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() < 0.0))
        s = -s;
    return s;
}

inline double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

// Isotropic medium.  eta != 0 selects the complexified frequency omega*(1 + i*eta),
// used only by the lattice-sum cross checks.
struct ElasticMedium {
    double lambda = 0.0;
    double mu = 0.0;
    double rho = 1.0;
    double omega = 0.0;
    double eta = 0.0;

    cdouble omega_c() const { return omega * cdouble(1.0, eta); }
    cdouble rho_omega2() const { return rho * omega_c() * omega_c(); }
    cdouble kp_c() const { return omega_c() * std::sqrt(rho / (lambda + 2.0 * mu)); }
    cdouble ks_c() const { return omega_c() * std::sqrt(rho / mu); }
    double kp() const { return omega * std::sqrt(rho / (lambda + 2.0 * mu)); }
    double ks() const { return omega * std::sqrt(rho / mu); }
    bool damped() const { return eta != 0.0; }
};

inline ElasticMedium make_medium(double lambda, double mu, double rho, double omega, double eta = 0.0)
{
    if (!(mu > 0.0))
        fail(ErrorKind::InvalidMedium, "mu must be positive");
    if (!(lambda + mu > 0.0))
        fail(ErrorKind::InvalidMedium, "lambda + mu must be positive");
    if (!(omega > 0.0))
        fail(ErrorKind::InvalidMedium, "omega must be positive");
    if (!(rho > 0.0))
        fail(ErrorKind::InvalidMedium, "rho must be positive");
    if (!std::isfinite(lambda) || !std::isfinite(mu) || !std::isfinite(rho) || !std::isfinite(omega) ||
        !std::isfinite(eta) || eta < 0.0)
        fail(ErrorKind::InvalidMedium, "parameters must be finite and eta >= 0");
    return ElasticMedium{lambda, mu, rho, omega, eta};
}

enum class Geometry { QP2D, QP3D, BIQP3D };

struct QuasiMomentum {
    Geometry kind = Geometry::QP2D;
    double alpha = 0.0;
    double alpha2 = 0.0; // second component, BIQP only

    bool physical(const ElasticMedium& m) const
    {
        double a2 = alpha * alpha + (kind == Geometry::BIQP3D ? alpha2 * alpha2 : 0.0);
        return a2 <= m.kp() * m.kp();
    }
};

inline QuasiMomentum qp2d(double a) { return {Geometry::QP2D, a, 0.0}; }
inline QuasiMomentum qp3d(double a) { return {Geometry::QP3D, a, 0.0}; }
inline QuasiMomentum biqp(double a1, double a2) { return {Geometry::BIQP3D, a1, a2}; }

enum class ModeClass { L1, L2, L3 };

// One lattice mode; the lattice index is stored as the integer m with l = 2*pi*m.
struct ModeData {
    int m = 0;
    int m2 = 0;
    double alpha_l = 0.0;
    double alpha_l2 = 0.0;
    cdouble beta;
    cdouble gamma;
    ModeClass cls = ModeClass::L1;

    double alpha_sq() const { return alpha_l * alpha_l + alpha_l2 * alpha_l2; }
};

inline constexpr double default_tol_wood = 1e-8;

namespace detail {

inline ModeData fill_mode(const ElasticMedium& med, int m, int m2, double a1, double a2, double tol_wood)
{
    ModeData d;
    d.m = m;
    d.m2 = m2;
    d.alpha_l = a1;
    d.alpha_l2 = a2;
    const double a_sq = a1 * a1 + a2 * a2;
    const cdouble kp = med.kp_c(), ks = med.ks_c();
    d.beta = sqrt_up(kp * kp - a_sq);
    d.gamma = sqrt_up(ks * ks - a_sq);
    const double kp2 = med.kp() * med.kp(), ks2 = med.ks() * med.ks();
    if (a_sq < kp2)
        d.cls = ModeClass::L1;
    else if (a_sq < ks2)
        d.cls = ModeClass::L2;
    else
        d.cls = ModeClass::L3;
    if (!med.damped()) {
        const double tw = tol_wood * ks2;
        if (std::abs(a_sq - kp2) < tw || std::abs(a_sq - ks2) < tw)
            fail(ErrorKind::WoodAnomaly, "mode (" + std::to_string(m) + "," + std::to_string(m2) +
                                             ") sits on a Wood anomaly");
    }
    return d;
}

} // namespace detail

inline ModeData classify_mode(const ElasticMedium& med, const QuasiMomentum& q, int m,
                              double tol_wood = default_tol_wood)
{
    return detail::fill_mode(med, m, 0, q.alpha + two_pi * m, 0.0, tol_wood);
}

inline ModeData classify_mode_bi(const ElasticMedium& med, const QuasiMomentum& q, int m1, int m2,
                                 double tol_wood = default_tol_wood)
{
    return detail::fill_mode(med, m1, m2, q.alpha + two_pi * m1, q.alpha2 + two_pi * m2, tol_wood);
}

struct ModeCriterion {
    enum Kind { AllPropagating, TailBound } kind = AllPropagating;
    double gap = 1.0;
    double tol = 1e-16;

    static ModeCriterion all_propagating() { return {AllPropagating, 1.0, 1e-16}; }
    static ModeCriterion tail_bound(double gap, double tol) { return {TailBound, gap, tol}; }
};

// Largest |alpha_l| admitted by the criterion; exact filtering is done per mode.
inline double mode_radius(const ElasticMedium& med, const ModeCriterion& c)
{
    const double ks = std::abs(med.ks_c());
    if (c.kind == ModeCriterion::AllPropagating)
        return ks;
    const double decay = std::log(1.0 / c.tol) / c.gap;
    return std::sqrt(ks * ks + decay * decay);
}

inline bool mode_admitted(const ModeData& d, const ModeCriterion& c)
{
    if (c.kind == ModeCriterion::AllPropagating)
        return d.cls != ModeClass::L3;
    return std::exp(-d.gamma.imag() * c.gap) >= c.tol;
}

// Modes ordered by increasing m.  The admitted set depends on |alpha_l| only, so the set
// for -alpha is the mirror image of the set for alpha.
inline std::vector<ModeData> list_modes(const ElasticMedium& med, const QuasiMomentum& q, const ModeCriterion& c,
                                        double tol_wood = default_tol_wood)
{
    if (c.kind == ModeCriterion::TailBound && !(c.gap > 0.0))
        fail(ErrorKind::DomainError, "tail_bound needs gap > 0");
    const double r = mode_radius(med, c) + 1e-9;
    const int lo = static_cast<int>(std::ceil((-r - q.alpha) / two_pi));
    const int hi = static_cast<int>(std::floor((r - q.alpha) / two_pi));
    std::vector<ModeData> out;
    for (int m = lo; m <= hi; ++m) {
        ModeData d = classify_mode(med, q, m, tol_wood);
        if (mode_admitted(d, c))
            out.push_back(d);
    }
    return out;
}

// Biperiodic lattice, ordered by (m1, m2).
inline std::vector<ModeData> list_modes_bi(const ElasticMedium& med, const QuasiMomentum& q, const ModeCriterion& c,
                                           double tol_wood = default_tol_wood)
{
    const double r = mode_radius(med, c) + 1e-9;
    const int lo1 = static_cast<int>(std::ceil((-r - q.alpha) / two_pi));
    const int hi1 = static_cast<int>(std::floor((r - q.alpha) / two_pi));
    std::vector<ModeData> out;
    for (int m1 = lo1; m1 <= hi1; ++m1) {
        const double a1 = q.alpha + two_pi * m1;
        const double rem = std::sqrt(std::max(0.0, r * r - a1 * a1));
        const int lo2 = static_cast<int>(std::ceil((-rem - q.alpha2) / two_pi));
        const int hi2 = static_cast<int>(std::floor((rem - q.alpha2) / two_pi));
        for (int m2 = lo2; m2 <= hi2; ++m2) {
            ModeData d = classify_mode_bi(med, q, m1, m2, tol_wood);
            if (mode_admitted(d, c))
                out.push_back(d);
        }
    }
    return out;
}

} // namespace lamegf
