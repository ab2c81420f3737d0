#ifndef MIMOCAP_TESTS_SUPPORT_HPP
#define MIMOCAP_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "mimocap/types.hpp"

namespace mimocap::test
{

inline constexpr double kPi = 3.14159265358979323846;

/// log |det(I + H Q H^H)| through an LU factorisation, independent of the library kernels.
inline double logdet_lu(const CMatrix& h, const CMatrix& q)
{
    const CMatrix m = CMatrix::Identity(h.rows(), h.rows()) + h * q * h.adjoint();
    return std::log(std::abs(m.partialPivLu().determinant()));
}

/// |a - b| <= tol, an absolute tolerance.
inline bool near(double a, double b, double tol)
{
    return std::abs(a - b) <= tol;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

inline double min_eig(const CMatrix& a)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    return es.eigenvalues().minCoeff();
}

/// Maximum of f over a uniform grid of [lo, hi], refined around the best cell.
inline double scan_max(const std::function<double(double)>& f, double lo, double hi, double* argmax = nullptr)
{
    double best_x = lo;
    double best   = f(lo);
    for (int round = 0; round < 6; ++round)
    {
        const int n     = 200;
        const double dx = (hi - lo) / n;
        for (int i = 0; i <= n; ++i)
        {
            const double x = lo + dx * i;
            const double v = f(x);
            if (v > best)
            {
                best   = v;
                best_x = x;
            }
        }
        lo = std::max(lo, best_x - dx);
        hi = std::min(hi, best_x + dx);
    }
    if (argmax)
        *argmax = best_x;
    return best;
}

/// Root of a nondecreasing function on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi)
{
    for (int i = 0; i < 200; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline CMatrix unit_vector_outer(const CVector& u, const CVector& v, double gain)
{
    return gain * u.normalized() * v.normalized().adjoint();
}

} // namespace mimocap::test

#endif
