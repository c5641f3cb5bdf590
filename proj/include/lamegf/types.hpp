#pragma once

#include <complex>

#include <Eigen/Dense>

#include "medium.hpp"

namespace lamegf {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using CVec2 = Eigen::Vector2cd;
using CVec3 = Eigen::Vector3cd;
using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;

// Tensor value with truncation metadata.  tail_bound bounds the dropped part in max-norm.
struct GreenEval {
    int dim = 2;
    Eigen::MatrixXcd value;
    int modes_used = 0;
    double tail_bound = 0.0;
};

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Neumaier-compensated accumulation, entrywise; summation order is the call order.
template <int R, int C>
class CompensatedSum {
public:
    using M = Eigen::Matrix<cdouble, R, C>;
    void add(const M& v)
    {
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < C; ++j) {
                step(sr_(i, j), cr_(i, j), v(i, j).real());
                step(si_(i, j), ci_(i, j), v(i, j).imag());
            }
    }
    M value() const
    {
        M out;
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < C; ++j)
                out(i, j) = cdouble(sr_(i, j) + cr_(i, j), si_(i, j) + ci_(i, j));
        return out;
    }

private:
    static void step(double& s, double& c, double x)
    {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    Eigen::Matrix<double, R, C> sr_ = Eigen::Matrix<double, R, C>::Zero();
    Eigen::Matrix<double, R, C> si_ = Eigen::Matrix<double, R, C>::Zero();
    Eigen::Matrix<double, R, C> cr_ = Eigen::Matrix<double, R, C>::Zero();
    Eigen::Matrix<double, R, C> ci_ = Eigen::Matrix<double, R, C>::Zero();
};

} // namespace lamegf
