#include "mimocap/random.hpp"

#include <cmath>
#include <numbers>

namespace mimocap
{

double Rng::uniform()
{
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

double Rng::normal()
{
    if (m_has_spare)
    {
        m_has_spare = false;
        return m_spare;
    }
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    m_spare = r * std::sin(t);
    m_has_spare = true;
    return r * std::cos(t);
}

CMatrix random_gaussian_matrix(Rng& rng, Index rows, Index cols)
{
    const double s = std::sqrt(0.5);
    CMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
        {
            const double re = rng.normal();
            const double im = rng.normal();
            m(i, j) = Complex(s * re, s * im);
        }
    return m;
}

CMatrix random_rank_one_matrix(Rng& rng, Index rows, Index cols)
{
    CVector u = random_gaussian_matrix(rng, rows, 1).col(0);
    CVector v = random_gaussian_matrix(rng, cols, 1).col(0);
    u.normalize();
    v.normalize();
    const double gain = rng.uniform(0.5, 2.0);
    return gain * u * v.adjoint();
}

CMatrix random_low_rank_matrix(Rng& rng, Index rows, Index cols, Index rank)
{
    return random_gaussian_matrix(rng, rows, rank) * random_gaussian_matrix(rng, rank, cols);
}

CMatrix random_hermitian(Rng& rng, Index n)
{
    const CMatrix a = random_gaussian_matrix(rng, n, n);
    return 0.5 * (a + a.adjoint());
}

} // namespace mimocap
