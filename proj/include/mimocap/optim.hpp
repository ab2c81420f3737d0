#ifndef MIMOCAP_OPTIM_HPP
#define MIMOCAP_OPTIM_HPP

#include <functional>
#include <utility>
#include <vector>

#include "mimocap/types.hpp"

namespace mimocap
{

struct OptimSettings
{
    int max_iter              = 5000;
    double obj_tol            = 1e-10; ///< relative objective change that stops the ascent
    double feas_tol           = 1e-12;
    double armijo_c           = 1e-4;
    double armijo_shrink      = 0.5;
    int dykstra_max_sweeps    = 10000;
    double init_alpha         = 0.5; ///< alpha in the full-rank D-check start
    int max_newton_iter       = 200; ///< budget of the multiplier solvers

    /// Throws InputError unless every tolerance is positive and the budgets are >= 1.
    void validate() const;
};

/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping).
CMatrix project_psd(const CMatrix& q);

/// Clamp diagonal entries to Q_ii <= P_i; off-diagonal entries untouched.
CMatrix project_diag_cap(const CMatrix& q, const RVector& pap);

/// Shift by a multiple of I onto tr(Q) <= p_tot when the trace exceeds it.
CMatrix project_trace_cap(const CMatrix& q, double p_tot);

///
/// Dykstra's alternating projections onto PSD, the diagonal caps and the
/// trace cap. Stops when two consecutive sweeps differ by at most feas_tol
/// (Frobenius). Throws ConvergenceError carrying the last iterate when the
/// sweep budget runs out.
///
CovarianceMatrix dykstra_project(const CMatrix& q, const PowerConstraints& c,
                                 const OptimSettings& s);

/// Objective value and its gradient at a Hermitian point.
using ValueAndGradient = std::function<std::pair<double, CMatrix>(const CMatrix&)>;

struct AscentResult
{
    CovarianceMatrix q = CovarianceMatrix::zero(0);
    double value       = 0.0;
    std::vector<double> trace; ///< objective at the start and after every accepted step
    int iterations     = 0;
};

///
/// Maximise a concave function over {Q >= 0, diag(Q) <= P, tr(Q) <= P_tot} by
/// projected gradient ascent with Armijo backtracking along the projection
/// arc. Trial steps follow the Barzilai-Borwein rule seeded with
/// initial_step; backtracking stops at safe_step, a step no longer than the
/// inverse Lipschitz constant of the gradient. Terminates once the relative
/// objective change drops below obj_tol and the fixed-step projected gradient
/// is below 1e-10 relative to the gradient; 1e-8 is accepted when it stalls
/// for 100 iterations or at the last iteration of the budget. A stall above
/// that level tightens the projection tolerance tenfold, down to
/// 1e-3 * feas_tol.
///
AscentResult projected_gradient_ascent(const ValueAndGradient& f,
                                       const CovarianceMatrix& start,
                                       const PowerConstraints& c,
                                       const OptimSettings& s,
                                       double initial_step,
                                       double safe_step);

} // namespace mimocap

#endif
