#ifndef MIMOCAP_SOLVER_FULLRANK_HPP
#define MIMOCAP_SOLVER_FULLRANK_HPP

#include "mimocap/optim.hpp"
#include "mimocap/types.hpp"

namespace mimocap
{

/// K^{-1} (K D K - I)_+ K^{-1} with K = (H^H H)^{1/2}. Requires a full-rank h.
CovarianceMatrix q_from_dcheck(const ChannelMatrix& h, const DiagonalMultiplier& d);

/// Same map with a precomputed K.
CMatrix q_from_dcheck(const CMatrix& k, const RVector& d_check);

struct ClosedFormDiagnostics
{
    bool holds = false;
    double lower_bound = 0.0; ///< n_T lambda_max(K^-2) - tr(K^-2)
    double upper_bound = 0.0; ///< n_T min_i {(K^-2)_ii + P_i} - tr(K^-2)
    double lower_margin = 0.0; ///< P_tot - lower_bound
    double upper_margin = 0.0; ///< upper_bound - P_tot
};

/// Conditions under which the uniform-multiplier closed form is optimal.
ClosedFormDiagnostics closed_form_conditions(const ChannelMatrix& h,
                                             const PowerConstraints& c);

/// Q = ((P_tot + tr K^-2) / n_T) I - K^-2. Throws PreconditionError when the
/// conditions do not hold.
SolveReport solve_closed_form(const ChannelMatrix& h, const PowerConstraints& c);

/// Start point ((P_tot + alpha tr K^-2) / n_T) for every entry of D-check.
RVector initial_dcheck(const ChannelMatrix& h, double p_tot, double alpha);

/// Reduced full-rank solver over the n_T entries of D-check.
SolveReport solve_fullrank(const ChannelMatrix& h, const PowerConstraints& c,
                           const OptimSettings& s = {});

} // namespace mimocap

#endif
