#ifndef MIMOCAP_WATERFILL_HPP
#define MIMOCAP_WATERFILL_HPP

#include "mimocap/types.hpp"

namespace mimocap
{

/// Power levels p_i = (mu - 1/g_i)_+ with sum p_i = p_tot, for gains g_i > 0.
RVector waterfill_levels(const RVector& gains, double p_tot);

/// TP-only capacity by water-filling over the eigen-channels of h.
SolveReport waterfill_tp(const ChannelMatrix& h, double p_tot);

} // namespace mimocap

#endif
