#ifndef MIMOCAP_SOLVER_UNITRANK_HPP
#define MIMOCAP_SOLVER_UNITRANK_HPP

#include "mimocap/types.hpp"

namespace mimocap
{

/// Phase attached to q_i. `aligned` (angle q_i = angle v_i) maximises |v^H q|;
/// `conjugate` is kept only so tests can check that the suite detects it.
enum class PhaseConvention
{
    aligned,
    conjugate
};

///
/// Unique alpha >= 0 with sum_i min(alpha |v_i|^2, P_i) = p_tot, found by the
/// breakpoint scan over rho_i = P_i / |v_i|^2 in increasing order.
///
/// p_tot above sum P_i is clamped when `clamp` is set and raises
/// InfeasibleError otherwise. Returns +inf when the caps on the antennas with
/// v_i != 0 are exhausted before p_tot is reached.
///
double calculate_alpha(const CVector& v, const RVector& pap, double p_tot,
                       bool clamp = true);

/// Exact solver for rank-one channels (MISO included).
SolveReport solve_unitrank(const ChannelMatrix& h, const PowerConstraints& c,
                           PhaseConvention phase = PhaseConvention::aligned);

} // namespace mimocap

#endif
