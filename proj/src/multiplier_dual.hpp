// Lagrange-dual machinery behind the reduced full-rank and singular solvers.
//
// For multipliers D = lambda I + Lambda > 0 the Lagrangian
//   log det(I + H Q H^H) - tr(D Q)
// is maximised over Q >= 0 by Q(D-check) = S g(S G S) S with G = H^H H,
// S = D-check^{1/2} and g(x) = (1 - 1/x)_+. For a full-rank channel this is
// K^{-1} (K D-check K - I)_+ K^{-1}. The dual function is smooth and convex
// in (lambda, Lambda); its minimiser gives the optimal D-check.
#ifndef MIMOCAP_SRC_MULTIPLIER_DUAL_HPP
#define MIMOCAP_SRC_MULTIPLIER_DUAL_HPP

#include <vector>

#include "mimocap/types.hpp"

namespace mimocap::detail
{

struct LagrangianMaximizer
{
    CMatrix q;      ///< Lagrangian maximiser
    RVector mu;     ///< eigenvalues of S G S, ascending
    CMatrix basis;  ///< eigenvectors of S G S
    double psi = 0; ///< max_Q log det(I + HQH^H) - tr(DQ)
};

LagrangianMaximizer lagrangian_maximizer(const CMatrix& gram, const RVector& d_check);

/// d Q_ii / d d_j where d = 1 / d_check, at a precomputed maximiser.
RMatrix diag_jacobian(const CMatrix& gram, const RVector& d_check,
                      const LagrangianMaximizer& lm);

struct DualResult
{
    RVector d_check;
    CMatrix q;
    double tp_multiplier = 0.0;
    RVector pap_multipliers;
    double projected_gradient = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> trace; ///< dual objective, nonincreasing
};

///
/// Projected Newton on the dual. When p_tot >= sum P_i the trace constraint
/// is redundant and only the per-antenna multipliers are optimised.
///
DualResult minimize_dual(const CMatrix& gram, const PowerConstraints& c,
                         const RVector& d_check0, int max_iter);

} // namespace mimocap::detail

#endif
