#pragma once

#include <functional>

#include "medium.hpp"
#include "types.hpp"

namespace lamegf {

// Fourth-order central differences of tensor fields, used for PDE residual checks.

template <int D>
using TensorField = std::function<Eigen::Matrix<cdouble, D, D>(const Eigen::Matrix<double, D, 1>&)>;

namespace fd {

inline constexpr double c1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
inline constexpr double c2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};

template <int D>
Eigen::Matrix<cdouble, D, D> d2(const TensorField<D>& f, const Eigen::Matrix<double, D, 1>& x, int i, int j, double h)
{
    using M = Eigen::Matrix<cdouble, D, D>;
    using V = Eigen::Matrix<double, D, 1>;
    M out = M::Zero();
    if (i == j) {
        for (int a = 0; a < 5; ++a) {
            if (c2[a] == 0.0)
                continue;
            V p = x;
            p(i) += (a - 2) * h;
            out += c2[a] * f(p);
        }
        return out / (h * h);
    }
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
            const double w = c1[a] * c1[b];
            if (w == 0.0)
                continue;
            V p = x;
            p(i) += (a - 2) * h;
            p(j) += (b - 2) * h;
            out += w * f(p);
        }
    return out / (h * h);
}

} // namespace fd

// (L + rho omega^2) applied columnwise to a tensor field, L u = mu Lap u + (lambda+mu) grad div u.
template <int D>
Eigen::Matrix<cdouble, D, D> navier_apply(const ElasticMedium& med, const TensorField<D>& f,
                                          const Eigen::Matrix<double, D, 1>& x, double h)
{
    using M = Eigen::Matrix<cdouble, D, D>;
    M H[D][D];
    for (int i = 0; i < D; ++i)
        for (int j = i; j < D; ++j) {
            H[i][j] = fd::d2<D>(f, x, i, j, h);
            H[j][i] = H[i][j];
        }
    M out = med.rho_omega2() * f(x);
    for (int c = 0; c < D; ++c)
        for (int i = 0; i < D; ++i) {
            cdouble v = 0.0;
            for (int k = 0; k < D; ++k)
                v += med.mu * H[k][k](i, c) + (med.lambda + med.mu) * H[i][k](k, c);
            out(i, c) += v;
        }
    return out;
}

// Max-norm residual divided by |rho omega^2| * max|G(x)|.
template <int D>
double navier_residual_rel(const ElasticMedium& med, const TensorField<D>& f, const Eigen::Matrix<double, D, 1>& x,
                           double h)
{
    const auto R = navier_apply<D>(med, f, x, h);
    const double scale = std::abs(med.rho_omega2()) * f(x).cwiseAbs().maxCoeff();
    return R.cwiseAbs().maxCoeff() / scale;
}

} // namespace lamegf
