#include "mimocap/solver_unitrank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "mimocap/errors.hpp"
#include "mimocap/linalg.hpp"
#include "mimocap/solver_singular.hpp"
#include "report_util.hpp"

namespace mimocap
{

double calculate_alpha(const CVector& v, const RVector& pap, double p_tot, bool clamp)
{
    const Index n = v.size();
    if (pap.size() != n || n == 0)
    {
        throw InputError("calculate_alpha: v and P must have the same nonzero length");
    }
    if (std::abs(v.norm() - 1.0) > 1e-9)
    {
        throw InputError("calculate_alpha: v must have unit norm");
    }
    if (!(p_tot > 0.0))
    {
        throw InputError("calculate_alpha: total power must be positive");
    }
    const double cap_sum = pap.sum();
    if (p_tot > cap_sum)
    {
        if (!clamp)
        {
            throw InfeasibleError("total power exceeds the sum of the per-antenna bounds");
        }
        p_tot = cap_sum;
    }

    const RVector mag2 = v.cwiseAbs2();
    RVector rho(n);
    for (Index i = 0; i < n; ++i)
    {
        rho(i) = mag2(i) > 0.0 ? pap(i) / mag2(i) : std::numeric_limits<double>::infinity();
    }
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return rho(a) < rho(b); });

    // Suffix sums of |v_pi(k)|^2.
    std::vector<double> tail(static_cast<std::size_t>(n) + 1, 0.0);
    for (Index k = n - 1; k >= 0; --k)
    {
        tail[static_cast<std::size_t>(k)] =
            tail[static_cast<std::size_t>(k) + 1] + mag2(order[static_cast<std::size_t>(k)]);
    }

    double consumed = 0.0;
    double last_rho = 0.0;
    for (Index k = 0; k < n; ++k)
    {
        const Index i      = order[static_cast<std::size_t>(k)];
        const double denom = tail[static_cast<std::size_t>(k)];
        if (!(denom > 0.0))
        {
            // Only antennas with v_i = 0 remain; no finite alpha reaches p_tot.
            return std::numeric_limits<double>::infinity();
        }
        const double alpha = (p_tot - consumed) / denom;
        if (alpha <= rho(i) * (1.0 + 1e-12))
        {
            return std::min(alpha, rho(i));
        }
        consumed += pap(i);
        last_rho = rho(i);
    }
    // p_tot equal to the cap sum up to rounding: every cap binds.
    return last_rho;
}

SolveReport solve_unitrank(const ChannelMatrix& h, const PowerConstraints& c,
                           PhaseConvention phase)
{
    if (c.size() != h.n_t())
    {
        throw InputError("per-antenna bound count does not match n_T");
    }
    if (h.rank() != 1)
    {
        throw RoutingError("unit-rank solver needs rank(H) = 1 (rank " +
                           std::to_string(h.rank()) + ")");
    }
    const auto t0 = detail::Clock::now();

    const CVector v     = h.v().col(0);
    const double gain   = h.singular_values()(0);
    const double alpha  = calculate_alpha(v, c.pap(), c.p_tot(), true);
    const Index n       = h.n_t();

    CVector q(n);
    for (Index i = 0; i < n; ++i)
    {
        const double m2 = std::norm(v(i));
        const double w2 = m2 > 0.0 ? std::min(alpha * m2, c.pap()(i)) : 0.0;
        const double ph = std::arg(v(i));
        const double sgn = phase == PhaseConvention::aligned ? 1.0 : -1.0;
        q(i) = std::sqrt(w2) * std::polar(1.0, sgn * ph);
    }
    const double proj = std::norm(v.dot(q)); // |v^H q|^2

    SolveReport rep;
    rep.q_opt         = CovarianceMatrix(q * q.adjoint());
    rep.capacity_nats = std::log1p(gain * gain * proj);
    rep.solver        = SolverKind::unitrank;
    rep.tp_active     = detail::tp_flag(rep.q_opt, c);
    rep.pap_active    = detail::pap_flags(rep.q_opt, c);
    rep.kkt_residual  = kkt_residual(h, c, rep.q_opt);
    rep.iterations    = 1;
    rep.n_var         = n_var_for(static_cast<int>(n), 1);
    rep.wall_time     = detail::elapsed_since(t0);
    return rep;
}

} // namespace mimocap
