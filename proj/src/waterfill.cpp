#include "mimocap/waterfill.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <vector>

#include "mimocap/errors.hpp"
#include "mimocap/linalg.hpp"
#include "report_util.hpp"

namespace mimocap
{

RVector waterfill_levels(const RVector& gains, double p_tot)
{
    if (!(p_tot > 0.0))
    {
        throw InputError("water-filling needs a positive power budget");
    }
    const Index m = gains.size();
    if (m == 0 || !(gains.array() > 0.0).all())
    {
        throw DomainError("water-filling needs positive channel gains");
    }
    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return gains(a) > gains(b); });

    // Grow the active set along increasing inverse gains until the level
    // drops to the next breakpoint.
    double inv_sum = 0.0;
    double level   = 0.0;
    Index active   = 0;
    for (Index k = 0; k < m; ++k)
    {
        const double inv = 1.0 / gains(order[static_cast<std::size_t>(k)]);
        const double mu  = (p_tot + inv_sum + inv) / static_cast<double>(k + 1);
        if (mu <= inv)
        {
            break;
        }
        inv_sum += inv;
        level  = mu;
        active = k + 1;
    }

    RVector p = RVector::Zero(m);
    for (Index k = 0; k < active; ++k)
    {
        const Index i = order[static_cast<std::size_t>(k)];
        p(i)          = std::max(0.0, level - 1.0 / gains(i));
    }
    return p;
}

SolveReport waterfill_tp(const ChannelMatrix& h, double p_tot)
{
    const auto t0 = detail::Clock::now();
    const RVector gains = h.singular_values().array().square();
    const RVector p     = waterfill_levels(gains, p_tot);

    const CMatrix& v = h.v();
    const CMatrix q  = v * p.cast<Complex>().asDiagonal() * v.adjoint();

    SolveReport rep;
    rep.q_opt         = CovarianceMatrix(q);
    rep.capacity_nats = (gains.array() * p.array()).log1p().sum();
    rep.solver        = SolverKind::waterfill;
    rep.tp_active     = true;
    rep.pap_active.assign(static_cast<std::size_t>(h.n_t()), false);
    const PowerConstraints tp_only(
        p_tot, RVector::Constant(h.n_t(), std::numeric_limits<double>::infinity()));
    rep.kkt_residual = kkt_residual(h, tp_only, rep.q_opt);
    rep.iterations   = 1;
    rep.n_var        = static_cast<int>(h.rank());
    rep.wall_time    = detail::elapsed_since(t0);
    return rep;
}

} // namespace mimocap
