#include "mimocap/solver_singular.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "mimocap/errors.hpp"
#include "mimocap/linalg.hpp"
#include "mimocap/solver_basic.hpp"
#include "multiplier_dual.hpp"
#include "report_util.hpp"

namespace mimocap
{

LowRankFactor::LowRankFactor(CMatrix b) : m_b(std::move(b)) {}

LowRankFactor factor_from_dcheck(const ChannelMatrix& h, const DiagonalMultiplier& d)
{
    if (d.size() != h.n_t())
    {
        throw InputError("factor_from_dcheck: D-check has the wrong length");
    }
    const RVector s  = d.values().cwiseSqrt();
    const CMatrix hs = h.entries() * s.asDiagonal();
    Eigen::JacobiSVD<CMatrix> svd(hs, Eigen::ComputeThinV);
    const Index nu = h.rank();

    // B = S V' (I - Sigma'^{-2})_+^{1/2} on the nu leading singular directions of H S.
    RVector w(nu);
    for (Index k = 0; k < nu; ++k)
    {
        const double sv = svd.singularValues()(k);
        w(k)            = sv > 1.0 ? std::sqrt(1.0 - 1.0 / (sv * sv)) : 0.0;
    }
    CMatrix b = s.asDiagonal() * svd.matrixV().leftCols(nu) * w.cast<Complex>().asDiagonal();
    return LowRankFactor(std::move(b));
}

double coupling_residual(const ChannelMatrix& h, const DiagonalMultiplier& d,
                         const CovarianceMatrix& q)
{
    if (d.size() != h.n_t() || q.size() != h.n_t())
    {
        throw InputError("coupling_residual: dimension mismatch");
    }
    const Index n_r   = h.n_r();
    const CMatrix& hm = h.entries();
    const CMatrix f   = hermitian_part(hm * d.values().cast<Complex>().asDiagonal() * hm.adjoint());
    const CMatrix fp  = positive_part_hermitian(f - CMatrix::Identity(n_r, n_r));
    const RVector sinv = h.singular_values().cwiseInverse();
    const CMatrix rhs = sinv.asDiagonal() * h.u().adjoint() * fp * h.u() * sinv.asDiagonal();
    const CMatrix lhs = h.v().adjoint() * q.entries() * h.v();
    return (lhs - rhs).norm();
}

int n_var_for(int n_t, int nu)
{
    if (n_t < 1 || nu < 1 || nu > n_t)
    {
        throw InputError("n_var_for needs 1 <= nu <= n_T");
    }
    return 2 * (n_t - nu) * nu + n_t;
}

namespace
{

// Singular-case analogue of the full-rank start: water level of the nu
// eigen-channels with a fraction alpha of their inverse gains.
RVector singular_initial_dcheck(const ChannelMatrix& h, double p_tot, double alpha)
{
    const RVector& sv = h.singular_values();
    const double inv  = sv.array().square().inverse().sum();
    return RVector::Constant(h.n_t(), (p_tot + alpha * inv) / static_cast<double>(sv.size()));
}

} // namespace

SolveReport solve_singular(const ChannelMatrix& h, const PowerConstraints& c,
                           const OptimSettings& s)
{
    if (c.size() != h.n_t())
    {
        throw InputError("per-antenna bound count does not match n_T");
    }
    const Index nu = h.rank();
    if (nu <= 1 || nu >= h.n_t())
    {
        throw RoutingError("singular solver needs 1 < rank(H) < n_T (rank " +
                           std::to_string(nu) + ", n_T " + std::to_string(h.n_t()) + ")");
    }
    s.validate();
    const auto t0 = detail::Clock::now();

    const PowerConstraints eff = c.clamped();
    const RVector d0 = singular_initial_dcheck(h, eff.p_tot(), s.init_alpha);
    detail::DualResult dual = detail::minimize_dual(h.gramian(), eff, d0, s.max_newton_iter);

    std::optional<CovarianceMatrix> q;
    std::optional<DiagonalMultiplier> dcheck;
    if (dual.converged)
    {
        try
        {
            dcheck = DiagonalMultiplier(dual.d_check);
            const LowRankFactor b = factor_from_dcheck(h, *dcheck);
            q = CovarianceMatrix(b.product(), 1e-8);
            if (coupling_residual(h, *dcheck, *q) > 1e-7 * std::max(1.0, c.p_tot()))
            {
                q.reset();
            }
        }
        catch (const DomainError&)
        {
            q.reset();
        }
    }
    if (!q)
    {
        SolveReport rep = solve_basic(h, c, s);
        rep.fell_back   = true;
        rep.wall_time   = detail::elapsed_since(t0);
        return rep;
    }

    SolveReport rep;
    rep.q_opt         = *q;
    rep.capacity_nats = mutual_information(h, rep.q_opt);
    rep.solver        = SolverKind::singular;
    rep.tp_active     = c.tp_active_possible() && detail::tp_flag(rep.q_opt, c);
    rep.pap_active    = detail::pap_flags(rep.q_opt, c);
    rep.kkt_residual  = kkt_residual(h, c, rep.q_opt);
    rep.iterations    = dual.iterations;
    rep.n_var         = n_var_for(static_cast<int>(h.n_t()), static_cast<int>(nu));
    rep.d_check       = dcheck;
    rep.dual_trace    = std::move(dual.trace);
    rep.wall_time     = detail::elapsed_since(t0);
    return rep;
}

} // namespace mimocap
