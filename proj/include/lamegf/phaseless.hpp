#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bem2d.hpp"
#include "errors.hpp"
#include "green2d.hpp"
#include "medium.hpp"
#include "types.hpp"

namespace lamegf {

// Fixed source z_fixed on a line below the movable ones; movable sources on an ellipse arc
// center + (ax cos t, ay sin t), t in [t0, t1]; measurement points (x1_m, h).
struct SourceConfig {
    Vec2 z_fixed{0.5, 0.3};
    Vec2 q_fixed{1.0, 0.0};
    Vec2 arc_center{0.5, 0.5};
    double arc_ax = 0.2, arc_ay = 0.05;
    double arc_t0 = 0.0, arc_t1 = pi;
    int n_movable = 3;
    std::vector<Vec2> q_movable{Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
    std::vector<Vec2> probes{Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
    double h = 0.8;
    int n_meas = 16;
};

inline std::vector<Vec2> movable_sources(const SourceConfig& c)
{
    std::vector<Vec2> z;
    for (int j = 0; j < c.n_movable; ++j) {
        const double t = c.n_movable == 1 ? 0.5 * (c.arc_t0 + c.arc_t1)
                                          : c.arc_t0 + (c.arc_t1 - c.arc_t0) * j / (c.n_movable - 1);
        z.push_back(c.arc_center + Vec2(c.arc_ax * std::cos(t), c.arc_ay * std::sin(t)));
    }
    return z;
}

inline std::vector<double> measurement_x1(const SourceConfig& c)
{
    std::vector<double> x(c.n_meas);
    for (int m = 0; m < c.n_meas; ++m)
        x[m] = (m + 0.5) / c.n_meas;
    return x;
}

inline void validate_sources(const SourceConfig& c, const ProfileCurve2* prof = nullptr)
{
    auto unit = [](const Vec2& v, const char* what) {
        if (std::abs(v.norm() - 1.0) > 1e-12)
            fail(ErrorKind::ConfigError, std::string(what) + " must be a unit vector");
    };
    unit(c.q_fixed, "q");
    for (const auto& v : c.q_movable)
        unit(v, "q_l");
    for (const auto& v : c.probes)
        unit(v, "p_k");
    for (size_t i = 0; i < c.probes.size(); ++i)
        for (size_t j = i + 1; j < c.probes.size(); ++j)
            if (std::abs(c.probes[i](0) * c.probes[j](1) - c.probes[i](1) * c.probes[j](0)) < 1e-12)
                fail(ErrorKind::ConfigError, "probe polarizations must be pairwise non-colinear");
    if (c.n_movable < 1 || c.n_meas < 1 || c.q_movable.empty() || c.probes.empty())
        fail(ErrorKind::ConfigError, "empty source or measurement configuration");
    double lo = 1e300, hi = -1e300;
    for (const auto& z : movable_sources(c)) {
        lo = std::min(lo, z(1));
        hi = std::max(hi, z(1));
    }
    const double fmax = prof ? prof->max_value() : -1e300;
    if (!(fmax < c.z_fixed(1) && c.z_fixed(1) < lo && hi < c.h))
        fail(ErrorKind::ConfigError, "heights must satisfy max f < z_fixed < movable sources < h");
}

enum class Which { Fixed, Movable, Both };

inline CVec2 incident_superposition(const ElasticMedium& med, const QuasiMomentum& q, const SourceConfig& c,
                                    const Vec2& x, Which which, int j = 0, int l = 0)
{
    CVec2 u = CVec2::Zero();
    if (which != Which::Movable)
        u += Mat2(green2d_eval(med, q, x, c.z_fixed).value) * c.q_fixed.cast<cdouble>();
    if (which != Which::Fixed) {
        const Vec2 z = movable_sources(c).at(j);
        u += Mat2(green2d_eval(med, q, x, z).value) * c.q_movable.at(l).cast<cdouble>();
    }
    return u;
}

// Magnitudes only. r(k, m); s and sup indexed (k, l, j, m).
struct PhaselessDataset {
    int K = 0, L = 0, J = 0, M = 0;
    std::vector<double> x1;
    double h = 0.0;
    std::vector<double> r, s, sup;
    std::string dirichlet_condition = "assumed";

    size_t ri(int k, int m) const { return size_t(k) * M + m; }
    size_t si(int k, int l, int j, int m) const { return ((size_t(k) * L + l) * J + j) * M + m; }
};

inline PhaselessDataset synth_phaseless(const ElasticMedium& med, const QuasiMomentum& q, const ProfileCurve2& prof,
                                        const SourceConfig& c, int N, const BemOptions& opt = {})
{
    validate_sources(c, &prof);
    const BemSystem sys = build_bem_system(med, q, prof, N, opt);
    const auto zs = movable_sources(c);
    PhaselessDataset ds;
    ds.K = static_cast<int>(c.probes.size());
    ds.L = static_cast<int>(c.q_movable.size());
    ds.J = c.n_movable;
    ds.M = c.n_meas;
    ds.x1 = measurement_x1(c);
    ds.h = c.h;
    ds.r.resize(size_t(ds.K) * ds.M);
    ds.s.resize(size_t(ds.K) * ds.L * ds.J * ds.M);
    ds.sup.resize(ds.s.size());

    auto total = [&](const ScatterSolution& sol, const Vec2& x) {
        return CVec2(incident_jet(med, q, sol.incident, x, false).u + eval_scattered(sol, x).u);
    };
    const ScatterSolution s0 = solve_dirichlet(sys, point_source(c.z_fixed, c.q_fixed));
    std::vector<CVec2> u0(ds.M);
    for (int m = 0; m < ds.M; ++m)
        u0[m] = total(s0, Vec2(ds.x1[m], c.h));
    for (int k = 0; k < ds.K; ++k)
        for (int m = 0; m < ds.M; ++m)
            ds.r[ds.ri(k, m)] = std::abs(c.probes[k].cast<cdouble>().dot(u0[m]));
    for (int l = 0; l < ds.L; ++l)
        for (int j = 0; j < ds.J; ++j) {
            const ScatterSolution sj = solve_dirichlet(sys, point_source(zs[j], c.q_movable[l]));
            for (int m = 0; m < ds.M; ++m) {
                const CVec2 u1 = total(sj, Vec2(ds.x1[m], c.h));
                for (int k = 0; k < ds.K; ++k) {
                    const CVec2 p = c.probes[k].cast<cdouble>();
                    ds.s[ds.si(k, l, j, m)] = std::abs(p.dot(u1));
                    ds.sup[ds.si(k, l, j, m)] = std::abs(p.dot(u0[m] + u1));
                }
            }
        }
    return ds;
}

// Re(a conj(b)) from |a|, |b|, |a+b|.
inline double re_product(double ra, double rb, double rab) { return 0.5 * (rab * rab - ra * ra - rb * rb); }

inline double cosine_identity(const PhaselessDataset& a, const PhaselessDataset& b)
{
    if (a.K != b.K || a.L != b.L || a.J != b.J || a.M != b.M || a.x1 != b.x1 || a.h != b.h)
        fail(ErrorKind::GridMismatch, "datasets are on different grids");
    double worst = 0.0;
    for (int k = 0; k < a.K; ++k)
        for (int l = 0; l < a.L; ++l)
            for (int j = 0; j < a.J; ++j)
                for (int m = 0; m < a.M; ++m) {
                    const size_t i = a.si(k, l, j, m), i0 = a.ri(k, m);
                    const double pa = re_product(a.r[i0], a.s[i], a.sup[i]);
                    const double pb = re_product(b.r[i0], b.s[i], b.sup[i]);
                    worst = std::max(worst, std::abs(pa - pb));
                }
    return worst;
}

enum class ReciprocityLevel { PointSource, Scattered, Total };

// x, z field points; p, q polarizations.
struct ReciprocityPair {
    Vec2 x, z, p, q;
};

inline double check_reciprocity(const ElasticMedium& med, const QuasiMomentum& qm, const ProfileCurve2& prof,
                                ReciprocityLevel level, const std::vector<ReciprocityPair>& pairs, int N = 256,
                                const BemOptions& opt = {})
{
    for (const auto& pr : pairs)
        if ((pr.x - pr.z).norm() == 0.0)
            fail(ErrorKind::CoincidentPoints, "reciprocity sample points coincide");
    const QuasiMomentum qn = qp2d(-qm.alpha);
    double worst = 0.0;
    if (level == ReciprocityLevel::PointSource) {
        for (const auto& pr : pairs) {
            const cdouble a = pr.p.cast<cdouble>().dot(Mat2(green2d_eval(med, qm, pr.x, pr.z).value) * pr.q.cast<cdouble>());
            const cdouble b = pr.q.cast<cdouble>().dot(Mat2(green2d_eval(med, qn, pr.z, pr.x).value) * pr.p.cast<cdouble>());
            worst = std::max(worst, std::abs(a - b));
        }
        return worst;
    }
    const BemSystem sp = build_bem_system(med, qm, prof, N, opt);
    const BemSystem sn = build_bem_system(med, qn, prof, N, opt);
    for (const auto& pr : pairs) {
        const ScatterSolution a = solve_dirichlet(sp, point_source(pr.z, pr.q));
        const ScatterSolution b = solve_dirichlet(sn, point_source(pr.x, pr.p));
        CVec2 ua = eval_scattered(a, pr.x).u, ub = eval_scattered(b, pr.z).u;
        if (level == ReciprocityLevel::Total) {
            ua += incident_jet(med, qm, a.incident, pr.x, false).u;
            ub += incident_jet(med, qn, b.incident, pr.z, false).u;
        }
        worst = std::max(worst, std::abs(pr.p.cast<cdouble>().dot(ua) - pr.q.cast<cdouble>().dot(ub)));
    }
    return worst;
}

// l = -1 marks the fixed-source track r^k.
struct ProbeFlag {
    int k, l;
};

inline std::vector<ProbeFlag> nonvanishing_probe(const PhaselessDataset& ds, double tol = 1e-12)
{
    std::vector<ProbeFlag> flags;
    for (int k = 0; k < ds.K; ++k) {
        bool zero = true;
        for (int m = 0; m < ds.M && zero; ++m)
            zero = ds.r[ds.ri(k, m)] < tol;
        if (zero)
            flags.push_back({k, -1});
    }
    for (int k = 0; k < ds.K; ++k)
        for (int l = 0; l < ds.L; ++l) {
            bool zero = true;
            for (int j = 0; j < ds.J && zero; ++j)
                for (int m = 0; m < ds.M && zero; ++m)
                    zero = ds.s[ds.si(k, l, j, m)] < tol;
            if (zero)
                flags.push_back({k, l});
        }
    return flags;
}

} // namespace lamegf
