#pragma once

#include <array>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "green_free.hpp"
#include "medium.hpp"
#include "types.hpp"

namespace lamegf {

enum class Form { Literal, Unified };
enum class Case2D { LiteralL1, LiteralL2, LiteralL3, Unified };

inline constexpr double default_gap_min_2d = 1e-3;

// matrix is the tabulated G_i^{alpha_l} block including its prefactor.  Those blocks use
// a normalization where sum_l e^{i alpha_l x1} G_i = -G^alpha / (2 pi) relative to the
// Kupradze-normalized lattice sum, see green2d_eval.
struct ModeTerm2D {
    ModeData mode;
    Mat2 matrix;
    Case2D case_used = Case2D::Unified;
};

namespace detail {

// Mode block normalized so that G = sum_l e^{i alpha_l (x1-y1)} block(x2-y2).
inline Mat2 mode_block_2d(const ElasticMedium& med, const ModeData& d, double t, Mat2* dt = nullptr)
{
    const double a = d.alpha_l, s = sgn(t), at = std::abs(t);
    const cdouble b = d.beta, g = d.gamma;
    const cdouble ep = std::exp(I * b * at), es = std::exp(I * g * at);
    const cdouble f = I / (2.0 * med.rho_omega2());
    Mat2 M;
    M(0, 0) = f * (g * es + a * a / b * ep);
    M(0, 1) = M(1, 0) = f * a * s * (ep - es);
    M(1, 1) = f * (b * ep + a * a / g * es);
    if (dt) {
        (*dt)(0, 0) = f * I * s * (g * g * es + a * a * ep);
        (*dt)(0, 1) = (*dt)(1, 0) = f * I * a * (b * ep - g * es);
        (*dt)(1, 1) = f * I * s * (b * b * ep + a * a * es);
    }
    return M;
}

// Three-case tables, real frequency only.
inline Mat2 mode_literal_2d(const ElasticMedium& med, const ModeData& d, double t)
{
    const double lam = med.lambda, mu = med.mu;
    const double kp2 = med.kp() * med.kp(), ks2 = med.ks() * med.ks();
    const double a = d.alpha_l, a2 = a * a, s = sgn(t), at = std::abs(t);
    Mat2 M;
    if (d.cls == ModeClass::L1) {
        const cdouble pre = I / (4.0 * pi) * (lam + mu) / (mu * (lam + 2 * mu) * (kp2 - ks2));
        const double gs = std::sqrt(ks2 - a2), gp = std::sqrt(kp2 - a2);
        const cdouble es = std::exp(I * gs * at), ep = std::exp(I * gp * at);
        M(0, 0) = gs * es + a2 / gp * ep;
        M(0, 1) = M(1, 0) = s * a * (ep - es);
        M(1, 1) = gp * ep + a2 / gs * es;
        return pre * M;
    }
    const double pre = 1.0 / (4.0 * pi) * (lam + mu) / (mu * (lam + 2 * mu) * (ks2 - kp2));
    if (d.cls == ModeClass::L2) {
        const double bp = std::sqrt(a2 - kp2), gs = std::sqrt(ks2 - a2);
        const double ep = std::exp(-bp * at);
        const cdouble es = std::exp(I * gs * at);
        M(0, 0) = -a2 / bp * ep - I * gs * es;
        M(0, 1) = M(1, 0) = I * a * s * (es - ep);
        M(1, 1) = bp * ep - I * a2 / gs * es;
        return pre * M;
    }
    const double bs = std::sqrt(a2 - ks2), bp = std::sqrt(a2 - kp2);
    const double es = std::exp(-bs * at), ep = std::exp(-bp * at);
    M(0, 0) = bs * es - a2 / bp * ep;
    M(0, 1) = M(1, 0) = I * a * s * (es - ep);
    M(1, 1) = bp * ep - a2 / bs * es;
    return pre * M;
}

// Upper bound on the max-norm of block(t) for an evanescent mode.
inline double block_bound_2d(const ElasticMedium& med, double alpha_l, double gap)
{
    const cdouble ks = med.ks_c();
    const double img = sqrt_up(ks * ks - alpha_l * alpha_l).imag();
    if (!(img > 0.0))
        return std::numeric_limits<double>::infinity();
    const double P = std::abs(alpha_l) + std::abs(ks) + alpha_l * alpha_l / img;
    return P * std::exp(-img * gap) / std::abs(med.rho_omega2());
}

// Bound on sum of block bounds over alpha_l = a0, a0 + step, a0 + 2 step, ... (|a0| beyond k_s).
inline double tail_sum_2d(const ElasticMedium& med, double a0, double step, double gap)
{
    const double A = std::abs(a0);
    const double ratio = std::pow(1.0 + two_pi / A, 2) * std::exp(-two_pi * gap);
    const double b0 = block_bound_2d(med, a0, gap);
    if (b0 == 0.0)
        return 0.0;
    if (ratio < 0.9)
        return b0 / (1.0 - ratio);
    double s = 0.0;
    for (int j = 0; j < 10000000; ++j) {
        const double bj = block_bound_2d(med, a0 + j * step, gap);
        s += bj;
        if (bj < 1e-20 * s && j > 10)
            return s * (1.0 + 1e-12);
    }
    return std::numeric_limits<double>::infinity();
}

} // namespace detail

inline ModeTerm2D mode_term_2d(const ElasticMedium& med, const ModeData& mode, double x2, double y2,
                               Form form = Form::Unified)
{
    ModeTerm2D out;
    out.mode = mode;
    const double t = x2 - y2;
    if (form == Form::Unified) {
        out.matrix = -detail::mode_block_2d(med, mode, t) / two_pi;
        out.case_used = Case2D::Unified;
        return out;
    }
    if (med.damped())
        fail(ErrorKind::DomainError, "mode_term_2d: literal tables need a real frequency");
    out.matrix = detail::mode_literal_2d(med, mode, t);
    out.case_used = mode.cls == ModeClass::L1 ? Case2D::LiteralL1
                    : mode.cls == ModeClass::L2 ? Case2D::LiteralL2
                                                : Case2D::LiteralL3;
    return out;
}

struct Green2DOptions {
    double tol = 1e-12;
    double gap_min = default_gap_min_2d;
    double tol_wood = default_tol_wood;
};

namespace detail {

inline void check_gap_2d(double gap, double gap_min)
{
    if (!(gap >= gap_min))
        fail(ErrorKind::NearSourceLine, "|x2 - y2| = " + std::to_string(gap) + " is below gap_min");
}

inline double tail_2d(const ElasticMedium& med, const std::vector<ModeData>& modes, double alpha, double gap)
{
    if (modes.empty())
        return std::numeric_limits<double>::infinity();
    const double lo = alpha + two_pi * (modes.front().m - 1);
    const double hi = alpha + two_pi * (modes.back().m + 1);
    return tail_sum_2d(med, lo, -two_pi, gap) + tail_sum_2d(med, hi, two_pi, gap);
}

} // namespace detail

// Quasi-periodic Green tensor with (L + rho omega^2) G = -sum_n e^{i n alpha} delta(x - y - n e1).
inline GreenEval green2d_eval(const ElasticMedium& med, const QuasiMomentum& q, const Vec2& x, const Vec2& y,
                              const Green2DOptions& opt = {})
{
    const double t = x(1) - y(1);
    const double gap = std::abs(t);
    detail::check_gap_2d(gap, opt.gap_min);
    auto modes = list_modes(med, q, ModeCriterion::tail_bound(gap, opt.tol), opt.tol_wood);
    CompensatedSum<2, 2> acc;
    const double dx1 = x(0) - y(0);
    for (const auto& d : modes)
        acc.add(std::exp(I * (d.alpha_l * dx1)) * detail::mode_block_2d(med, d, t));
    GreenEval out;
    out.dim = 2;
    out.value = acc.value();
    out.modes_used = static_cast<int>(modes.size());
    out.tail_bound = detail::tail_2d(med, modes, q.alpha, gap);
    return out;
}

inline GreenEval green2d_eval(const ElasticMedium& med, const QuasiMomentum& q, const Vec2& x, const Vec2& y,
                              double tol)
{
    Green2DOptions o;
    o.tol = tol;
    return green2d_eval(med, q, x, y, o);
}

// Value and x-gradient of the same series, differentiated term by term.
inline Jet2 green2d_jet(const ElasticMedium& med, const QuasiMomentum& q, const Vec2& x, const Vec2& y,
                        const Green2DOptions& opt = {})
{
    const double t = x(1) - y(1);
    const double gap = std::abs(t);
    detail::check_gap_2d(gap, opt.gap_min);
    auto modes = list_modes(med, q, ModeCriterion::tail_bound(gap, opt.tol), opt.tol_wood);
    CompensatedSum<2, 2> g, g1, g2;
    const double dx1 = x(0) - y(0);
    for (const auto& d : modes) {
        Mat2 dt;
        const Mat2 B = detail::mode_block_2d(med, d, t, &dt);
        const cdouble ph = std::exp(I * (d.alpha_l * dx1));
        g.add(ph * B);
        g1.add((I * d.alpha_l * ph) * B);
        g2.add(ph * dt);
    }
    Jet2 J;
    J.G = g.value();
    J.dG[0] = g1.value();
    J.dG[1] = g2.value();
    return J;
}

} // namespace lamegf
