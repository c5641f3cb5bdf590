#pragma once

#include <cmath>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "medium.hpp"
#include "specfun.hpp"
#include "types.hpp"

namespace lamegf {

// ---- 2D ----

struct RayleighTerm2 {
    ModeData mode;
    cdouble up = 0.0, us = 0.0;
};

struct RayleighCoeffs2 {
    std::vector<RayleighTerm2> terms;
};

// Mode data without the Wood-anomaly guard; expansions are finite there.
inline ModeData rayleigh_mode(const ElasticMedium& med, const QuasiMomentum& q, int m)
{
    return detail::fill_mode(med, m, 0, q.alpha + two_pi * m, 0.0, 0.0);
}

inline RayleighCoeffs2 make_coeffs_2d(const ElasticMedium& med, const QuasiMomentum& q,
                                      const std::vector<std::tuple<int, cdouble, cdouble>>& amps)
{
    RayleighCoeffs2 c;
    for (auto& [m, up, us] : amps)
        c.terms.push_back({rayleigh_mode(med, q, m), up, us});
    return c;
}

// Field value and gradient, grad(i, k) = d u_i / d x_k.
struct FieldJet2 {
    CVec2 u = CVec2::Zero();
    Mat2 grad = Mat2::Zero();
};

inline FieldJet2 eval_rayleigh_2d_jet(const RayleighCoeffs2& c, const Vec2& x)
{
    FieldJet2 J;
    for (const auto& t : c.terms) {
        const double a = t.mode.alpha_l;
        const cdouble b = t.mode.beta, g = t.mode.gamma;
        if (t.up != 0.0) {
            const cdouble e = t.up * std::exp(I * (a * x(0) + b * x(1)));
            const CVec2 v(a, b);
            J.u += e * v;
            J.grad.col(0) += I * a * e * v;
            J.grad.col(1) += I * b * e * v;
        }
        if (t.us != 0.0) {
            const cdouble e = t.us * std::exp(I * (a * x(0) + g * x(1)));
            const CVec2 v(g, -a);
            J.u += e * v;
            J.grad.col(0) += I * a * e * v;
            J.grad.col(1) += I * g * e * v;
        }
    }
    return J;
}

inline CVec2 eval_rayleigh_2d(const RayleighCoeffs2& c, const Vec2& x) { return eval_rayleigh_2d_jet(c, x).u; }

inline CVec2 eval_rayleigh_2d(const ElasticMedium&, const QuasiMomentum&, const RayleighCoeffs2& c, const Vec2& x)
{
    return eval_rayleigh_2d(c, x);
}

inline constexpr double degenerate_basis_tol = 1e-10;

// Samples u(x0 + j/Ns, h), j = 0..Ns-1; recovers the modes m = -M..M.
inline RayleighCoeffs2 extract_coeffs_2d(const ElasticMedium& med, const QuasiMomentum& q,
                                         const std::vector<CVec2>& samples, double x0, double h, int M)
{
    const int Ns = static_cast<int>(samples.size());
    if (M < 0 || Ns < 2 * M + 1)
        fail(ErrorKind::AliasedGrid, std::to_string(Ns) + " samples cannot resolve modes |m| <= " + std::to_string(M));
    const double ks2 = std::norm(med.ks_c());
    RayleighCoeffs2 out;
    for (int m = -M; m <= M; ++m) {
        const ModeData d = rayleigh_mode(med, q, m);
        CVec2 U = CVec2::Zero();
        for (int j = 0; j < Ns; ++j) {
            const double xj = x0 + double(j) / Ns;
            U += samples[j] * std::exp(-I * (d.alpha_l * xj));
        }
        U /= double(Ns);
        const double a = d.alpha_l;
        const cdouble b = d.beta, g = d.gamma;
        const cdouble key = a * a + b * g;
        if (std::abs(key) < degenerate_basis_tol * ks2)
            fail(ErrorKind::DegenerateModeBasis, "mode " + std::to_string(m) + ": alpha^2 + beta gamma vanishes");
        // [a g; b -a] [P; S] = U with P = up e^{i b h}, S = us e^{i g h}
        const cdouble det = -key;
        const cdouble P = (-a * U(0) - g * U(1)) / det;
        const cdouble S = (a * U(1) - b * U(0)) / det;
        out.terms.push_back({d, P * std::exp(-I * b * h), S * std::exp(-I * g * h)});
    }
    return out;
}

// Traction T = 2 mu d_nu u + lambda nu div u - mu tau curl u with tau = (-nu2, nu1).
inline CVec2 traction_2d(const ElasticMedium& med, const Mat2& grad, const Vec2& nu, const Vec2& tau)
{
    if (std::abs(nu.norm() - 1.0) > 1e-12 || (tau - Vec2(-nu(1), nu(0))).norm() > 1e-12)
        fail(ErrorKind::DomainError, "traction_2d: need unit nu and tau = (-nu2, nu1)");
    const CVec2 dnu = grad * nu.cast<cdouble>();
    const cdouble div = grad(0, 0) + grad(1, 1);
    const cdouble curl = grad(1, 0) - grad(0, 1);
    return 2.0 * med.mu * dnu + med.lambda * div * nu.cast<cdouble>() - med.mu * curl * tau.cast<cdouble>();
}

inline CVec2 traction_2d(const ElasticMedium& med, const Mat2& grad, const Vec2& nu)
{
    return traction_2d(med, grad, nu, Vec2(-nu(1), nu(0)));
}

struct FluxSample {
    CVec2 u;
    CVec2 T;
};

// Time-averaged energy flux (omega/2) Im int T . conj(u) over one period of a horizontal
// line with upward normal; positive means upward transport.
inline double flux_2d(const ElasticMedium& med, const std::vector<FluxSample>& samples)
{
    if (samples.empty())
        fail(ErrorKind::DomainError, "flux_2d: no samples");
    double acc = 0.0;
    for (const auto& s : samples)
        acc += (s.T.dot(s.u)).imag(); // dot conjugates its first argument
    // Im(conj(T).u) = -Im(T.conj(u))
    return -0.5 * med.omega * acc / double(samples.size());
}

inline std::vector<FluxSample> rayleigh_flux_samples(const ElasticMedium& med, const RayleighCoeffs2& c, double h,
                                                     int Ns)
{
    std::vector<FluxSample> s;
    for (int j = 0; j < Ns; ++j) {
        const FieldJet2 J = eval_rayleigh_2d_jet(c, Vec2(double(j) / Ns, h));
        s.push_back({J.u, traction_2d(med, J.grad, Vec2(0, 1))});
    }
    return s;
}

struct UpgoingDiagnostic {
    double max_propagating = 0.0;
    bool holds = false;
};

inline UpgoingDiagnostic check_upgoing(const RayleighCoeffs2& c)
{
    double norm = 0.0, prop = 0.0;
    for (const auto& t : c.terms) {
        norm = std::max({norm, std::abs(t.up), std::abs(t.us)});
        if (t.mode.cls == ModeClass::L1)
            prop = std::max(prop, std::abs(t.up));
        if (t.mode.cls != ModeClass::L3)
            prop = std::max(prop, std::abs(t.us));
    }
    return {prop, norm > 0.0 && prop > 1e-10 * norm};
}

// ---- 3D biperiodic ----

struct RayleighTerm3Bi {
    ModeData mode;
    cdouble Ap = 0.0;
    CVec3 As = CVec3::Zero();
};

struct RayleighCoeffs3Bi {
    std::vector<RayleighTerm3Bi> terms;
};

inline ModeData rayleigh_mode_bi(const ElasticMedium& med, const QuasiMomentum& q, int m1, int m2)
{
    return detail::fill_mode(med, m1, m2, q.alpha + two_pi * m1, q.alpha2 + two_pi * m2, 0.0);
}

inline CVec3 eval_rayleigh_3d_bi(const RayleighCoeffs3Bi& c, const Vec3& x)
{
    CVec3 u = CVec3::Zero();
    for (const auto& t : c.terms) {
        const double a1 = t.mode.alpha_l, a2 = t.mode.alpha_l2;
        const cdouble ph = std::exp(I * (a1 * x(0) + a2 * x(1)));
        u += t.Ap * ph * std::exp(I * t.mode.beta * x(2)) * CVec3(a1, a2, t.mode.beta);
        u += ph * std::exp(I * t.mode.gamma * x(2)) * t.As;
    }
    return u;
}

// Optional check that each s amplitude is orthogonal to its wave vector.
inline bool transversal(const RayleighCoeffs3Bi& c, double tol = 1e-12)
{
    for (const auto& t : c.terms) {
        const CVec3 k(t.mode.alpha_l, t.mode.alpha_l2, t.mode.gamma);
        if (std::abs(k.dot(t.As.conjugate())) > tol * (1.0 + k.norm() * t.As.norm()))
            return false;
    }
    return true;
}

// ---- 3D quasi-periodic, cylindrical harmonics ----

struct CylinderMode {
    int n = 0;                // axial lattice index, alpha_n = alpha + 2 pi n
    std::vector<cdouble> A;   // A[m + M]
    std::vector<CVec3> B;     // B[m + M]
};

struct RayleighCoeffs3Qp {
    int M = 20;
    std::vector<CylinderMode> modes;
};

inline CVec3 eval_rayleigh_3d_qp(const ElasticMedium& med, const QuasiMomentum& q, const RayleighCoeffs3Qp& c,
                                 const Vec3& x)
{
    const double x2 = x(1), x3 = x(2);
    const double r = std::hypot(x2, x3);
    if (!(r > 0.0))
        fail(ErrorKind::DomainError, "eval_rayleigh_3d_qp: r must be positive");
    const double theta = std::atan2(x3, x2);
    const double kp = med.kp(), ks = med.ks();
    const int M = c.M;
    CVec3 u = CVec3::Zero();
    for (const auto& md : c.modes) {
        if (static_cast<int>(md.A.size()) != 2 * M + 1 || static_cast<int>(md.B.size()) != 2 * M + 1)
            fail(ErrorKind::DomainError, "eval_rayleigh_3d_qp: amplitude arrays must have 2M+1 entries");
        const double an = q.alpha + two_pi * md.n;
        const cdouble ph = std::exp(I * (an * x(0)));
        bool has_p = false, has_s = false;
        for (int k = 0; k <= 2 * M; ++k) {
            has_p = has_p || md.A[k] != 0.0;
            has_s = has_s || md.B[k] != CVec3::Zero();
        }
        if (has_p) {
            if (!(an * an < kp * kp))
                fail(ErrorKind::DomainError, "p amplitudes need a propagating axial mode");
            const double bn = std::sqrt(kp * kp - an * an);
            CVec3 v = CVec3::Zero();
            for (int m = -M; m <= M; ++m) {
                const cdouble Am = md.A[m + M];
                if (Am == 0.0)
                    continue;
                const cdouble e = std::exp(I * (m * theta));
                const cdouble H = hankel1(m, bn * r), dH = hankel1_deriv(m, bn * r);
                v(0) += Am * I * an * H * e;
                v(1) += Am * e / r * (x2 * bn * dH - I * double(m) * x3 / r * H);
                v(2) += Am * e / r * (x3 * bn * dH + I * double(m) * x2 / r * H);
            }
            u += ph * v;
        }
        if (has_s) {
            if (!(an * an < ks * ks))
                fail(ErrorKind::DomainError, "s amplitudes need a propagating axial mode");
            const double gn = std::sqrt(ks * ks - an * an);
            CVec3 v = CVec3::Zero();
            for (int m = -M; m <= M; ++m) {
                const CVec3& Bm = md.B[m + M];
                if (Bm == CVec3::Zero())
                    continue;
                const cdouble e = std::exp(I * (m * theta));
                const cdouble H = hankel1(m, gn * r), dH = hankel1_deriv(m, gn * r);
                const cdouble d2 = (x2 * gn * dH - I * double(m) * x3 / r * H) / r; // d/dx2 of H e^{im theta}, sans e
                const cdouble d3 = (x3 * gn * dH + I * double(m) * x2 / r * H) / r;
                v(0) += e * (d2 * Bm(2) - d3 * Bm(1));
                v(1) += e * Bm(0) * d3;
                v(2) += -e * Bm(0) * d2;
                v(1) += I * an * e * H * (-Bm(2));
                v(2) += I * an * e * H * Bm(1);
            }
            u += ph * v;
        }
    }
    return u;
}

} // namespace lamegf
