#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "green2d.hpp"
#include "green_free.hpp"
#include "medium.hpp"
#include "rayleigh.hpp"
#include "specfun.hpp"
#include "types.hpp"

namespace lamegf {

// f(x1) = c0 + sum_k a_k cos(2 pi k x1) + b_k sin(2 pi k x1), k = 1..degree.
struct ProfileCurve2 {
    double c0 = 0.0;
    std::vector<double> a, b;

    int degree() const { return static_cast<int>(std::max(a.size(), b.size())); }
    double coef_a(int k) const { return k - 1 < static_cast<int>(a.size()) ? a[k - 1] : 0.0; }
    double coef_b(int k) const { return k - 1 < static_cast<int>(b.size()) ? b[k - 1] : 0.0; }

    // derivative order d = 0, 1, 2
    double eval(double x, int d = 0) const
    {
        double s = d == 0 ? c0 : 0.0;
        for (int k = 1; k <= degree(); ++k) {
            const double w = two_pi * k, c = std::cos(w * x), sn = std::sin(w * x);
            const double ak = coef_a(k), bk = coef_b(k);
            if (d == 0)
                s += ak * c + bk * sn;
            else if (d == 1)
                s += w * (-ak * sn + bk * c);
            else
                s += -w * w * (ak * c + bk * sn);
        }
        return s;
    }
    Vec2 point(double t) const { return {t, eval(t)}; }
    Vec2 normal(double t) const
    {
        const double fp = eval(t, 1);
        return Vec2(-fp, 1.0) / std::sqrt(1.0 + fp * fp);
    }
    double speed(double t) const
    {
        const double fp = eval(t, 1);
        return std::sqrt(1.0 + fp * fp);
    }
    double max_value(int samples = 2048) const
    {
        double m = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < samples; ++j)
            m = std::max(m, eval(double(j) / samples));
        return m;
    }
    double min_value(int samples = 2048) const
    {
        double m = std::numeric_limits<double>::infinity();
        for (int j = 0; j < samples; ++j)
            m = std::min(m, eval(double(j) / samples));
        return m;
    }
};

enum class IncidentKind { PlaneP, PlaneS, PointSource };

// Plane waves: u = pol e^{i k d.x} with d the unit propagation direction (d2 < 0) and
// pol = d (p) or pol = (-d2, d1) rotated (s).  Point source: u = G^alpha(x, z) pol.
struct IncidentField {
    IncidentKind kind = IncidentKind::PlaneP;
    Vec2 direction{0.0, -1.0};
    Vec2 z{0.0, 0.0};
    Vec2 pol{0.0, -1.0};
};

inline IncidentField plane_p(double theta)
{
    IncidentField f;
    f.kind = IncidentKind::PlaneP;
    f.direction = Vec2(std::sin(theta), -std::cos(theta));
    f.pol = f.direction;
    return f;
}

inline IncidentField plane_s(double theta)
{
    IncidentField f;
    f.kind = IncidentKind::PlaneS;
    f.direction = Vec2(std::sin(theta), -std::cos(theta));
    f.pol = Vec2(-f.direction(1), f.direction(0));
    return f;
}

inline IncidentField point_source(const Vec2& z, const Vec2& pol)
{
    IncidentField f;
    f.kind = IncidentKind::PointSource;
    f.z = z;
    f.pol = pol;
    return f;
}

// Quasi-momentum selected by a plane wave.
inline QuasiMomentum incident_momentum(const ElasticMedium& med, const IncidentField& inc)
{
    const double k = inc.kind == IncidentKind::PlaneP ? med.kp() : med.ks();
    return qp2d(k * inc.direction(0));
}

inline void validate_incident(const ElasticMedium& med, const QuasiMomentum& q, const IncidentField& inc)
{
    if (std::abs(inc.pol.norm() - 1.0) > 1e-10)
        fail(ErrorKind::DomainError, "incident polarization must be a unit vector");
    if (inc.kind == IncidentKind::PointSource)
        return;
    if (std::abs(inc.direction.norm() - 1.0) > 1e-10 || !(inc.direction(1) < 0.0))
        fail(ErrorKind::DomainError, "plane-wave direction must be a downward unit vector");
    const double k = inc.kind == IncidentKind::PlaneP ? med.kp() : med.ks();
    if (std::abs(k * inc.direction(0) - q.alpha) > 1e-10 * std::max(1.0, k))
        fail(ErrorKind::DomainError, "plane-wave direction does not match the quasi-momentum");
    const double c = inc.pol.dot(inc.direction);
    if (inc.kind == IncidentKind::PlaneP && std::abs(std::abs(c) - 1.0) > 1e-10)
        fail(ErrorKind::DomainError, "p-wave polarization must be parallel to the direction");
    if (inc.kind == IncidentKind::PlaneS && std::abs(c) > 1e-10)
        fail(ErrorKind::DomainError, "s-wave polarization must be orthogonal to the direction");
}

inline FieldJet2 incident_jet(const ElasticMedium& med, const QuasiMomentum& q, const IncidentField& inc, const Vec2& x,
                              bool need_gradient = true)
{
    FieldJet2 J;
    if (inc.kind == IncidentKind::PointSource) {
        const CVec2 p = inc.pol.cast<cdouble>();
        if (need_gradient) {
            const Jet2 G = green2d_jet(med, q, x, inc.z);
            J.u = G.G * p;
            J.grad.col(0) = G.dG[0] * p;
            J.grad.col(1) = G.dG[1] * p;
        } else {
            J.u = Mat2(green2d_eval(med, q, x, inc.z).value) * p;
        }
        return J;
    }
    const double k = inc.kind == IncidentKind::PlaneP ? med.kp() : med.ks();
    const cdouble e = std::exp(I * k * inc.direction.dot(x));
    J.u = e * inc.pol.cast<cdouble>();
    J.grad.col(0) = I * k * inc.direction(0) * J.u;
    J.grad.col(1) = I * k * inc.direction(1) * J.u;
    return J;
}

struct BemOptions {
    int proxies = 80;
    double proxy_radius = 0.0; // 0: automatic
    int wall_points = 32;
    int line_points = 48;
    int rayleigh_K = 16;
    double margin = 0.35;
    double window_inner = 0.1;
    double window_outer = 0.45;
    double rcond_min = 1e-12;
};

struct ScatterSolution {
    ElasticMedium med;
    QuasiMomentum q;
    ProfileCurve2 profile;
    IncidentField incident;
    int N = 0;
    BemOptions opt;
    std::vector<Vec2> nodes;
    std::vector<double> speed;
    std::vector<CVec2> density; // per unit arc length
    std::vector<Vec2> proxy_pts;
    std::vector<CVec2> proxy_str;
    double H_top = 0.0, H_bot = 0.0;
    RayleighCoeffs2 top;    // absolute coefficients above H_top (upgoing)
    RayleighCoeffs2 bottom; // below H_bot, downgoing: up (alpha,-beta) e^{i(a x1 - b x2)}, us (gamma, alpha) e^{i(a x1 - g x2)}
    double rcond = 0.0;
    double arc_length = 0.0;
};

namespace bem {

// Traction matrix of the tensor field G at x: column j is T_nu of G[:, j].
inline Mat2 traction_matrix(const ElasticMedium& med, const Jet2& J, const Vec2& nu)
{
    Mat2 T;
    for (int j = 0; j < 2; ++j) {
        Mat2 grad;
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
                grad(i, k) = J.dG[k](i, j);
        T.col(j) = traction_2d(med, grad, nu);
    }
    return T;
}

// Coefficient of ln r in Gamma: phi1_log I + phi2_log rhat rhat^T (real frequency).
inline Mat2 log_coefficient(const ElasticMedium& med, const Vec2& d)
{
    const double r = d.norm();
    const double ks = med.ks(), kp = med.kp(), rw2 = med.rho_omega2().real();
    const double j0s = bessel_j(0, ks * r), j0p = bessel_j(0, kp * r);
    // J1(kr)/r computed stably for small r
    auto j1r = [](double k, double rr) { return rr * k < 1e-8 ? 0.5 * k : bessel_j(1, k * rr) / rr; };
    const double F = ks * j1r(ks, r) - kp * j1r(kp, r);
    const double p1 = -j0s / (2 * pi * med.mu) + F / (2 * pi * rw2);
    const double p2 = -(-ks * ks * j0s + kp * kp * j0p + 2.0 * F) / (2 * pi * rw2);
    Mat2 A = p1 * Mat2::Identity();
    if (r > 0.0)
        A += p2 * (d * d.transpose()).cast<cdouble>() / (r * r);
    return A;
}

// Gamma ~ L1 ln r I + C1 I + C2 that^T that as r -> 0.
struct DiagConstants {
    double L1;
    cdouble C1, C2;
};

inline DiagConstants diag_constants(const ElasticMedium& med)
{
    const double ks = med.ks(), kp = med.kp(), rw2 = med.rho_omega2().real(), mu = med.mu;
    const double g = detail::euler_gamma, dk2 = ks * ks - kp * kp;
    DiagConstants c;
    c.L1 = -1.0 / (2 * pi * mu) + dk2 / (4 * pi * rw2);
    c.C1 = I / (4 * mu) * (1.0 + 2.0 * I / pi * (std::log(ks / 2) + g)) -
           I / (4 * rw2) *
               (dk2 / 2 + I / pi * (ks * ks * std::log(ks / 2) - kp * kp * std::log(kp / 2)) - I / (2 * pi) * (1 - 2 * g) * dk2);
    c.C2 = dk2 / (4 * pi * rw2);
    return c;
}

// Kress weight for int_0^1 ln(4 sin^2(pi (t - t0))) phi(t) dt, node offset theta = t_j - t0, N nodes.
inline double kress_weight(int N, double theta)
{
    const int n = N / 2;
    const double t = two_pi * theta;
    double s = 0.0;
    for (int m = 1; m < n; ++m)
        s += std::cos(m * t) / m;
    return -s / n - std::cos(n * t) / (2.0 * n * n);
}

inline std::vector<double> kress_weights(int N)
{
    std::vector<double> R(N);
    for (int k = 0; k < N; ++k)
        R[k] = kress_weight(N, double(k) / N);
    return R;
}

// C-infinity window, 1 for |d| <= a, 0 for |d| >= b.
inline double window(double d, double a, double b)
{
    const double x = std::abs(d);
    if (x <= a)
        return 1.0;
    if (x >= b)
        return 0.0;
    const double s = (b - x) / (b - a);
    const double e0 = std::exp(-1.0 / s), e1 = std::exp(-1.0 / (1.0 - s));
    return e0 / (e0 + e1);
}

inline double wrap_offset(double d) { return d - std::round(d); }

} // namespace bem

inline void check_bem_size(int N)
{
    if (N < 32 || (N & (N - 1)) != 0)
        fail(ErrorKind::DomainError, "N must be a power of two >= 32");
}

// Near-copy single layer on the curve: u_near(y(t_i)) = sum_j W_ij psi_j for targets at curve
// parameters t_i, sources at the N nodes. The log singularity of the nearest image is handled
// by windowed Kress quadrature, everything else by the trapezoid rule.
inline Eigen::MatrixXcd bem_layer_on_curve(const ElasticMedium& med, const QuasiMomentum& q, const ProfileCurve2& prof,
                                           int N, const BemOptions& opt, const std::vector<double>& targets)
{
    const auto dc = bem::diag_constants(med);
    const int T = static_cast<int>(targets.size());
    Eigen::MatrixXcd W(2 * T, 2 * N);
    std::vector<Vec2> y(N);
    std::vector<double> sp(N);
    for (int j = 0; j < N; ++j) {
        y[j] = prof.point(double(j) / N);
        sp[j] = prof.speed(double(j) / N);
    }
    const cdouble ph[3] = {std::exp(-I * q.alpha), 1.0, std::exp(I * q.alpha)};
    for (int i = 0; i < T; ++i) {
        const double ti = targets[i];
        const Vec2 xi = prof.point(ti);
        for (int j = 0; j < N; ++j) {
            const double tj = double(j) / N;
            const double d = bem::wrap_offset(tj - ti);
            const int nstar = static_cast<int>(std::lround(ti + d - tj));
            const double w = sp[j] / N;
            Mat2 blk = Mat2::Zero();
            for (int n = -1; n <= 1; ++n) {
                const Vec2 yn = y[j] + Vec2(n, 0.0);
                if (n != nstar) {
                    blk += ph[n + 1] * kupradze2d(med, xi, yn) * w;
                    continue;
                }
                const double Rk = bem::kress_weight(N, d);
                if (std::abs(d) < 1e-14) {
                    const Vec2 tg = Vec2(1.0, prof.eval(ti, 1)) / sp[j];
                    const Mat2 B = (dc.C1 + dc.L1 * std::log(sp[j] / two_pi)) * Mat2::Identity() +
                                   dc.C2 * (tg * tg.transpose()).cast<cdouble>();
                    const Mat2 A = 0.5 * bem::log_coefficient(med, Vec2::Zero());
                    blk += ph[n + 1] * (B * w + Rk * sp[j] * A);
                    continue;
                }
                const Mat2 G = kupradze2d(med, xi, yn);
                const double chi = bem::window(d, opt.window_inner, opt.window_outer);
                if (chi > 0.0) {
                    const Mat2 A = 0.5 * bem::log_coefficient(med, xi - yn);
                    const double lg = std::log(4.0 * std::pow(std::sin(pi * d), 2));
                    blk += ph[n + 1] * (G * w + chi * sp[j] * (Rk - lg / N) * A);
                } else {
                    blk += ph[n + 1] * G * w;
                }
            }
            W.block<2, 2>(2 * i, 2 * j) = blk;
        }
    }
    return W;
}

inline Eigen::MatrixXcd bem_self_matrix(const ElasticMedium& med, const QuasiMomentum& q, const ProfileCurve2& prof,
                                        int N, const BemOptions& opt)
{
    std::vector<double> t(N);
    for (int j = 0; j < N; ++j)
        t[j] = double(j) / N;
    return bem_layer_on_curve(med, q, prof, N, opt, t);
}

namespace bem {

struct Cell {
    double Ht, Hb;
    Vec2 center;
    double Rp;
    std::vector<Vec2> proxies;
};

inline Cell make_cell(const ProfileCurve2& prof, const BemOptions& opt)
{
    Cell c;
    c.Ht = prof.max_value() + opt.margin;
    c.Hb = prof.min_value() - opt.margin;
    c.center = Vec2(0.5, 0.5 * (c.Ht + c.Hb));
    const double half_diag = std::hypot(0.5, 0.5 * (c.Ht - c.Hb));
    c.Rp = opt.proxy_radius > 0.0 ? opt.proxy_radius : std::sqrt(half_diag * 1.5);
    if (!(c.Rp > half_diag + 0.1))
        c.Rp = half_diag + 0.1;
    for (int k = 0; k < opt.proxies; ++k) {
        const double th = two_pi * k / opt.proxies;
        c.proxies.push_back(c.center + c.Rp * Vec2(std::cos(th), std::sin(th)));
    }
    return c;
}

inline std::vector<double> gauss_nodes(int n, double a, double b)
{
    // Golub-Welsch via Eigen
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k)
        J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<double> x(n);
    for (int k = 0; k < n; ++k)
        x[k] = 0.5 * (a + b) + 0.5 * (b - a) * es.eigenvalues()(k);
    return x;
}

// Upgoing (sign = +1) or downgoing (sign = -1) mode fields normalized at height h0.
inline FieldJet2 mode_jet(const ModeData& d, bool p_wave, int sign, double h0, const Vec2& x)
{
    const double a = d.alpha_l;
    const cdouble k2 = p_wave ? d.beta : d.gamma;
    CVec2 v;
    if (sign > 0)
        v = p_wave ? CVec2(a, d.beta) : CVec2(d.gamma, -a);
    else
        v = p_wave ? CVec2(a, -d.beta) : CVec2(d.gamma, a);
    const cdouble e = std::exp(I * (a * x(0) + double(sign) * k2 * (x(1) - h0)));
    FieldJet2 J;
    J.u = e * v;
    J.grad.col(0) = I * a * J.u;
    J.grad.col(1) = double(sign) * I * k2 * J.u;
    return J;
}

} // namespace bem

struct BemSystem {
    ScatterSolution base; // geometry and discretization, no incidence yet
    Eigen::MatrixXcd X;   // periodizing unknowns = -X psi
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    std::vector<ModeData> modes;
};

// Assembles and factors the boundary system once; incidences only change the right-hand side.
inline BemSystem build_bem_system(const ElasticMedium& med, const QuasiMomentum& q, const ProfileCurve2& prof, int N,
                                  const BemOptions& opt = {})
{
    check_bem_size(N);
    if (med.damped())
        fail(ErrorKind::DomainError, "solve_dirichlet: real frequency only");
    // Wood anomaly check on the modes that matter
    for (int m = -opt.rayleigh_K; m <= opt.rayleigh_K; ++m)
        classify_mode(med, q, m);

    BemSystem sys;
    ScatterSolution& sol = sys.base;
    sol.med = med;
    sol.q = q;
    sol.profile = prof;
    sol.N = N;
    sol.opt = opt;
    const bem::Cell cell = bem::make_cell(prof, opt);
    sol.H_top = cell.Ht;
    sol.H_bot = cell.Hb;
    sol.proxy_pts = cell.proxies;
    for (int j = 0; j < N; ++j) {
        const double t = double(j) / N;
        sol.nodes.push_back(prof.point(t));
        sol.speed.push_back(prof.speed(t));
        sol.arc_length += sol.speed.back() / N;
    }

    const int P = opt.proxies, K = opt.rayleigh_K, nK = 2 * K + 1;
    const int nQ = 2 * P + 4 * nK; // proxies, then top (p, s), then bottom (p, s)
    const double wT = 1.0 / ((med.lambda + 2 * med.mu) * (med.ks() + two_pi));
    const cdouble eia = std::exp(I * q.alpha);
    std::vector<ModeData> modes;
    for (int m = -K; m <= K; ++m)
        modes.push_back(rayleigh_mode(med, q, m));

    // rows: wall discrepancies (u, T) then top (u, T) then bottom (u, T)
    const auto wall_y = bem::gauss_nodes(opt.wall_points, cell.Hb, cell.Ht);
    const int Mw = opt.wall_points, Ml = opt.line_points;
    const int nrow = 4 * Mw + 8 * Ml;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(nrow, 2 * N), Q = Eigen::MatrixXcd::Zero(nrow, nQ);

    const Vec2 e1(1.0, 0.0), e2(0.0, 1.0);
    // Wall rows: the near-copy layer contributions reduce to the two far images.
    for (int k = 0; k < Mw; ++k) {
        const Vec2 L(0.0, wall_y[k]), Rr(1.0, wall_y[k]);
        const int r0 = 4 * k;
        for (int j = 0; j < N; ++j) {
            const double w = sol.speed[j] / N;
            const Jet2 Jr = kupradze2d_jet(med, Rr + e1, sol.nodes[j]);
            const Jet2 Jl = kupradze2d_jet(med, L - e1, sol.nodes[j]);
            const cdouble cr = std::exp(-I * q.alpha), cl = std::exp(2.0 * I * q.alpha);
            C.block<2, 2>(r0, 2 * j) = w * (cr * Jr.G - cl * Jl.G);
            C.block<2, 2>(r0 + 2, 2 * j) =
                wT * w * (cr * bem::traction_matrix(med, Jr, e1) - cl * bem::traction_matrix(med, Jl, e1));
        }
        for (int p = 0; p < P; ++p) {
            const Jet2 Jr = kupradze2d_jet(med, Rr, cell.proxies[p]);
            const Jet2 Jl = kupradze2d_jet(med, L, cell.proxies[p]);
            Q.block<2, 2>(r0, 2 * p) = Jr.G - eia * Jl.G;
            Q.block<2, 2>(r0 + 2, 2 * p) = wT * (bem::traction_matrix(med, Jr, e1) - eia * bem::traction_matrix(med, Jl, e1));
        }
    }
    // Top and bottom lines: layer + proxies - Rayleigh = 0.
    for (int side = 0; side < 2; ++side) {
        const double h = side == 0 ? cell.Ht : cell.Hb;
        const int sign = side == 0 ? 1 : -1;
        const int colR = 2 * P + side * 2 * nK;
        for (int k = 0; k < Ml; ++k) {
            const Vec2 x((k + 0.5) / Ml, h);
            const int r0 = 4 * Mw + side * 4 * Ml + 4 * k;
            for (int j = 0; j < N; ++j) {
                const double w = sol.speed[j] / N;
                Mat2 G = Mat2::Zero(), T = Mat2::Zero();
                for (int n = -1; n <= 1; ++n) {
                    const Jet2 J = kupradze2d_jet(med, x, sol.nodes[j] + Vec2(n, 0.0));
                    const cdouble ph = std::exp(I * (q.alpha * n));
                    G += ph * J.G;
                    T += ph * bem::traction_matrix(med, J, e2);
                }
                C.block<2, 2>(r0, 2 * j) = w * G;
                C.block<2, 2>(r0 + 2, 2 * j) = wT * w * T;
            }
            for (int p = 0; p < P; ++p) {
                const Jet2 J = kupradze2d_jet(med, x, cell.proxies[p]);
                Q.block<2, 2>(r0, 2 * p) = J.G;
                Q.block<2, 2>(r0 + 2, 2 * p) = wT * bem::traction_matrix(med, J, e2);
            }
            for (int m = 0; m < nK; ++m)
                for (int ps = 0; ps < 2; ++ps) {
                    const FieldJet2 F = bem::mode_jet(modes[m], ps == 0, sign, h, x);
                    const int col = colR + 2 * m + ps;
                    Q.block<2, 1>(r0, col) = -F.u;
                    Q.block<2, 1>(r0 + 2, col) = -wT * traction_2d(med, F.grad, e2);
                }
        }
    }

    // Boundary rows.
    Eigen::MatrixXcd A = bem_self_matrix(med, q, prof, N, opt);
    Eigen::MatrixXcd B(2 * N, nQ);
    B.setZero();
    for (int i = 0; i < N; ++i)
        for (int p = 0; p < P; ++p)
            B.block<2, 2>(2 * i, 2 * p) = kupradze2d(med, sol.nodes[i], cell.proxies[p]);

    // Eliminate the periodizing unknowns: xi = -Q^+ C psi.
    Eigen::VectorXd cs(nQ);
    for (int c = 0; c < nQ; ++c) {
        cs(c) = Q.col(c).norm();
        if (cs(c) == 0.0)
            cs(c) = 1.0;
        Q.col(c) /= cs(c);
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(Q, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-14);
    sys.X = cs.cwiseInverse().asDiagonal() * svd.solve(C);
    sys.lu.compute(A - B * sys.X);
    sol.rcond = sys.lu.rcond();
    if (!(sol.rcond >= opt.rcond_min))
        fail(ErrorKind::ResonanceSuspected, "single-layer system is near singular (rcond " + std::to_string(sol.rcond) + ")");
    sys.modes = modes;
    return sys;
}

inline ScatterSolution solve_dirichlet(const BemSystem& sys, const IncidentField& inc)
{
    ScatterSolution sol = sys.base;
    validate_incident(sol.med, sol.q, inc);
    sol.incident = inc;
    const int N = sol.N, P = sol.opt.proxies, nK = static_cast<int>(sys.modes.size());
    Eigen::VectorXcd rhs(2 * N);
    for (int i = 0; i < N; ++i)
        rhs.segment<2>(2 * i) = -incident_jet(sol.med, sol.q, inc, sol.nodes[i], false).u;
    const Eigen::VectorXcd psi = sys.lu.solve(rhs);
    const Eigen::VectorXcd xi = -(sys.X * psi);
    for (int j = 0; j < N; ++j)
        sol.density.push_back(psi.segment<2>(2 * j));
    for (int p = 0; p < P; ++p)
        sol.proxy_str.push_back(xi.segment<2>(2 * p));
    for (int m = 0; m < nK; ++m) {
        const ModeData& d = sys.modes[m];
        const cdouble tp = xi(2 * P + 2 * m), ts = xi(2 * P + 2 * m + 1);
        sol.top.terms.push_back({d, tp * std::exp(-I * d.beta * sol.H_top), ts * std::exp(-I * d.gamma * sol.H_top)});
        const cdouble bp = xi(2 * P + 2 * nK + 2 * m), bs = xi(2 * P + 2 * nK + 2 * m + 1);
        sol.bottom.terms.push_back({d, bp * std::exp(I * d.beta * sol.H_bot), bs * std::exp(I * d.gamma * sol.H_bot)});
    }
    return sol;
}

inline ScatterSolution solve_dirichlet(const ElasticMedium& med, const QuasiMomentum& q, const ProfileCurve2& prof,
                                       const IncidentField& inc, int N, const BemOptions& opt = {})
{
    validate_incident(med, q, inc);
    return solve_dirichlet(build_bem_system(med, q, prof, N, opt), inc);
}

// Distance from x to the periodic curve (all copies).
inline double distance_to_profile(const ProfileCurve2& prof, const Vec2& x, int samples = 4096)
{
    double best = std::numeric_limits<double>::infinity();
    const double x1 = x(0) - std::floor(x(0));
    for (int j = 0; j < samples; ++j) {
        const double t = double(j) / samples;
        for (int n = -1; n <= 1; ++n)
            best = std::min(best, (Vec2(x1, x(1)) - (prof.point(t) + Vec2(n, 0.0))).norm());
    }
    return best;
}

namespace bem {

inline FieldJet2 layer_and_proxy_jet(const ScatterSolution& sol, const Vec2& x, bool grad)
{
    FieldJet2 J;
    for (int j = 0; j < sol.N; ++j) {
        const double w = sol.speed[j] / sol.N;
        for (int n = -1; n <= 1; ++n) {
            const cdouble ph = std::exp(I * (sol.q.alpha * n)) * w;
            const Vec2 yn = sol.nodes[j] + Vec2(n, 0.0);
            if (grad) {
                const Jet2 K = kupradze2d_jet(sol.med, x, yn);
                J.u += ph * K.G * sol.density[j];
                J.grad.col(0) += ph * K.dG[0] * sol.density[j];
                J.grad.col(1) += ph * K.dG[1] * sol.density[j];
            } else {
                J.u += ph * kupradze2d(sol.med, x, yn) * sol.density[j];
            }
        }
    }
    for (size_t p = 0; p < sol.proxy_pts.size(); ++p) {
        if (grad) {
            const Jet2 K = kupradze2d_jet(sol.med, x, sol.proxy_pts[p]);
            J.u += K.G * sol.proxy_str[p];
            J.grad.col(0) += K.dG[0] * sol.proxy_str[p];
            J.grad.col(1) += K.dG[1] * sol.proxy_str[p];
        } else {
            J.u += kupradze2d(sol.med, x, sol.proxy_pts[p]) * sol.proxy_str[p];
        }
    }
    return J;
}

inline FieldJet2 bottom_jet(const ScatterSolution& sol, const Vec2& x)
{
    FieldJet2 J;
    for (const auto& t : sol.bottom.terms) {
        const ModeData& d = t.mode;
        const double a = d.alpha_l;
        const cdouble ep = t.up * std::exp(I * (a * x(0) - d.beta * x(1)));
        const cdouble es = t.us * std::exp(I * (a * x(0) - d.gamma * x(1)));
        const CVec2 vp(a, -d.beta), vs(d.gamma, a);
        J.u += ep * vp + es * vs;
        J.grad.col(0) += I * a * (ep * vp + es * vs);
        J.grad.col(1) += -I * d.beta * ep * vp - I * d.gamma * es * vs;
    }
    return J;
}

} // namespace bem

// Scattered field (and gradient) at x; points are wrapped into the unit cell by quasi-periodicity.
inline FieldJet2 eval_scattered(const ScatterSolution& sol, const Vec2& x, bool need_gradient = false)
{
    const double shift = std::floor(x(0));
    const Vec2 xc(x(0) - shift, x(1));
    const cdouble ph = std::exp(I * (sol.q.alpha * shift));
    FieldJet2 J;
    if (xc(1) >= sol.H_top) {
        J = eval_rayleigh_2d_jet(sol.top, xc);
    } else if (xc(1) <= sol.H_bot) {
        J = bem::bottom_jet(sol, xc);
    } else {
        const double dmin = 10.0 * sol.arc_length / sol.N;
        if (distance_to_profile(sol.profile, xc) < dmin)
            fail(ErrorKind::TooCloseToBoundary, "evaluation point within 10 h of the boundary");
        J = bem::layer_and_proxy_jet(sol, xc, need_gradient);
    }
    J.u *= ph;
    J.grad *= ph;
    return J;
}

// max |u_inc + u_sc| / max |u_inc| on the boundary at M points between the nodes.
inline double boundary_residual(const ScatterSolution& sol, int M = 0)
{
    if (M <= 0)
        M = 2 * sol.N;
    std::vector<double> t(M);
    for (int i = 0; i < M; ++i)
        t[i] = (i + 0.5) / M;
    const Eigen::MatrixXcd W = bem_layer_on_curve(sol.med, sol.q, sol.profile, sol.N, sol.opt, t);
    Eigen::VectorXcd psi(2 * sol.N);
    for (int j = 0; j < sol.N; ++j)
        psi.segment<2>(2 * j) = sol.density[j];
    const Eigen::VectorXcd u = W * psi;
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < M; ++i) {
        const Vec2 x = sol.profile.point(t[i]);
        CVec2 v = u.segment<2>(2 * i);
        for (size_t p = 0; p < sol.proxy_pts.size(); ++p)
            v += kupradze2d(sol.med, x, sol.proxy_pts[p]) * sol.proxy_str[p];
        const CVec2 ui = incident_jet(sol.med, sol.q, sol.incident, x, false).u;
        worst = std::max(worst, (v + ui).norm());
        scale = std::max(scale, ui.norm());
    }
    return scale > 0.0 ? worst / scale : worst;
}

struct EnergyBalance {
    double incident = 0.0, scattered = 0.0, total = 0.0;
    double relative() const { return std::abs(total) / std::abs(incident); }
};

// Fluxes through the line x2 = h (above the profile), Ns equispaced samples over one period.
inline EnergyBalance energy_balance(const ScatterSolution& sol, double h, int Ns = 256)
{
    std::vector<FluxSample> si, ss, st;
    const Vec2 e2(0.0, 1.0);
    for (int j = 0; j < Ns; ++j) {
        const Vec2 x(double(j) / Ns, h);
        const FieldJet2 a = incident_jet(sol.med, sol.q, sol.incident, x, true);
        const FieldJet2 b = eval_scattered(sol, x, true);
        const CVec2 Ta = traction_2d(sol.med, a.grad, e2), Tb = traction_2d(sol.med, b.grad, e2);
        si.push_back({a.u, Ta});
        ss.push_back({b.u, Tb});
        st.push_back({a.u + b.u, Ta + Tb});
    }
    return {flux_2d(sol.med, si), flux_2d(sol.med, ss), flux_2d(sol.med, st)};
}

} // namespace lamegf
