#ifndef MIMOCAP_SOLVER_SINGULAR_HPP
#define MIMOCAP_SOLVER_SINGULAR_HPP

#include "mimocap/optim.hpp"
#include "mimocap/types.hpp"

namespace mimocap
{

/// Q = B B^H with B of size n_T x nu.
class LowRankFactor
{
public:
    explicit LowRankFactor(CMatrix b);

    const CMatrix& values() const noexcept { return m_b; }
    CMatrix product() const { return m_b * m_b.adjoint(); }

private:
    CMatrix m_b;
};

/// Factor of the Lagrangian maximiser for a given D-check (rank <= nu).
LowRankFactor factor_from_dcheck(const ChannelMatrix& h, const DiagonalMultiplier& d);

///
/// || V^H Q V - Sigma^{-1} U^H (H D H^H - I)_+ U Sigma^{-1} ||_F
/// using the reduced SVD H = U Sigma V^H.
///
double coupling_residual(const ChannelMatrix& h, const DiagonalMultiplier& d,
                         const CovarianceMatrix& q);

/// 2 (n_T - nu) nu + n_T. Throws InputError unless 1 <= nu <= n_T.
int n_var_for(int n_t, int nu);

/// Reduced solver for rank-deficient channels with 1 < nu < n_T.
SolveReport solve_singular(const ChannelMatrix& h, const PowerConstraints& c,
                           const OptimSettings& s = {});

} // namespace mimocap

#endif
