// Helpers shared by the solver translation units.
#ifndef MIMOCAP_SRC_REPORT_UTIL_HPP
#define MIMOCAP_SRC_REPORT_UTIL_HPP

#include <algorithm>
#include <chrono>
#include <vector>

#include "mimocap/types.hpp"

namespace mimocap::detail
{

using Clock = std::chrono::steady_clock;

inline std::chrono::nanoseconds elapsed_since(Clock::time_point t0)
{
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0);
}

/// Tolerance used to flag an inequality as met with equality.
inline double activity_tol(double scale)
{
    return 1e-7 * std::max(1.0, scale);
}

inline std::vector<bool> pap_flags(const CovarianceMatrix& q, const PowerConstraints& c)
{
    std::vector<bool> out(static_cast<std::size_t>(c.size()));
    const RVector d = q.diagonal();
    for (Index i = 0; i < c.size(); ++i)
    {
        out[static_cast<std::size_t>(i)] = d(i) >= c.pap()(i) - activity_tol(c.pap()(i));
    }
    return out;
}

inline bool tp_flag(const CovarianceMatrix& q, const PowerConstraints& c)
{
    return q.trace() >= c.p_tot() - activity_tol(c.p_tot());
}

} // namespace mimocap::detail

#endif
