#include "mimocap/solver_fullrank.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "mimocap/errors.hpp"
#include "mimocap/linalg.hpp"
#include "mimocap/solver_basic.hpp"
#include "multiplier_dual.hpp"
#include "report_util.hpp"

namespace mimocap
{

namespace
{

struct GramianRoots
{
    CMatrix k_inv;     // K^{-1}
    CMatrix k_inv_sq;  // K^{-2} = (H^H H)^{-1}
};

GramianRoots gramian_roots(const ChannelMatrix& h)
{
    if (!h.full_rank())
    {
        throw DomainError("full-rank solver needs rank(H) = n_T");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.gramian());
    const RVector ev  = es.eigenvalues();
    const CMatrix& vv = es.eigenvectors();
    GramianRoots out;
    out.k_inv    = hermitian_part(vv * ev.cwiseSqrt().cwiseInverse().asDiagonal() * vv.adjoint());
    out.k_inv_sq = hermitian_part(vv * ev.cwiseInverse().asDiagonal() * vv.adjoint());
    return out;
}

CMatrix k_inverse(const CMatrix& k)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(k));
    return hermitian_part(es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                          es.eigenvectors().adjoint());
}

} // namespace

CMatrix q_from_dcheck(const CMatrix& k, const RVector& d_check)
{
    if (k.rows() != d_check.size())
    {
        throw InputError("q_from_dcheck: dimension mismatch");
    }
    const Index n   = k.rows();
    const CMatrix f = hermitian_part(k * d_check.cast<Complex>().asDiagonal() * k);
    const CMatrix ki = k_inverse(k);
    const CMatrix shifted = f - CMatrix::Identity(n, n);
    return hermitian_part(ki * positive_part_hermitian(shifted) * ki);
}

CovarianceMatrix q_from_dcheck(const ChannelMatrix& h, const DiagonalMultiplier& d)
{
    if (d.size() != h.n_t())
    {
        throw InputError("q_from_dcheck: D-check has the wrong length");
    }
    return CovarianceMatrix(q_from_dcheck(gramian_sqrt(h), d.values()), 1e-8);
}

ClosedFormDiagnostics closed_form_conditions(const ChannelMatrix& h, const PowerConstraints& c)
{
    if (c.size() != h.n_t())
    {
        throw InputError("per-antenna bound count does not match n_T");
    }
    const GramianRoots roots = gramian_roots(h);
    const double n           = static_cast<double>(h.n_t());
    const double tr          = roots.k_inv_sq.trace().real();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(roots.k_inv_sq, Eigen::EigenvaluesOnly);
    const double lmax = es.eigenvalues().maxCoeff();
    const double cap_min =
        (roots.k_inv_sq.diagonal().real() + c.pap()).minCoeff();

    ClosedFormDiagnostics out;
    out.lower_bound  = n * lmax - tr;
    out.upper_bound  = n * cap_min - tr;
    out.lower_margin = c.p_tot() - out.lower_bound;
    out.upper_margin = out.upper_bound - c.p_tot();
    out.holds        = out.lower_margin >= 0.0 && out.upper_margin >= 0.0;
    return out;
}

SolveReport solve_closed_form(const ChannelMatrix& h, const PowerConstraints& c)
{
    const auto t0                   = detail::Clock::now();
    const ClosedFormDiagnostics dg  = closed_form_conditions(h, c);
    if (!dg.holds)
    {
        throw PreconditionError("closed-form conditions violated (lower margin " +
                                std::to_string(dg.lower_margin) + ", upper margin " +
                                std::to_string(dg.upper_margin) + ")");
    }
    const GramianRoots roots = gramian_roots(h);
    const Index n            = h.n_t();
    const double level = (c.p_tot() + roots.k_inv_sq.trace().real()) / static_cast<double>(n);
    const CMatrix q    = CMatrix::Identity(n, n) * level - roots.k_inv_sq;

    SolveReport rep;
    rep.q_opt         = CovarianceMatrix(q, 1e-8);
    rep.capacity_nats = mutual_information(h, rep.q_opt);
    rep.solver        = SolverKind::closedform;
    rep.tp_active     = true;
    rep.pap_active    = detail::pap_flags(rep.q_opt, c);
    rep.kkt_residual  = kkt_residual(h, c, rep.q_opt);
    rep.iterations    = 0;
    rep.n_var         = static_cast<int>(n);
    rep.d_check       = DiagonalMultiplier(RVector::Constant(n, level));
    rep.wall_time     = detail::elapsed_since(t0);
    return rep;
}

RVector initial_dcheck(const ChannelMatrix& h, double p_tot, double alpha)
{
    const GramianRoots roots = gramian_roots(h);
    const double n           = static_cast<double>(h.n_t());
    return RVector::Constant(h.n_t(),
                             (p_tot + alpha * roots.k_inv_sq.trace().real()) / n);
}

SolveReport solve_fullrank(const ChannelMatrix& h, const PowerConstraints& c,
                           const OptimSettings& s)
{
    if (c.size() != h.n_t())
    {
        throw InputError("per-antenna bound count does not match n_T");
    }
    s.validate();
    const auto t0 = detail::Clock::now();

    const PowerConstraints eff = c.clamped();
    const RVector d0           = initial_dcheck(h, eff.p_tot(), s.init_alpha);
    detail::DualResult dual    = detail::minimize_dual(h.gramian(), eff, d0, s.max_newton_iter);

    std::optional<CovarianceMatrix> q;
    if (dual.converged)
    {
        try
        {
            q = CovarianceMatrix(q_from_dcheck(gramian_sqrt(h), dual.d_check), 1e-8);
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
    rep.solver        = SolverKind::fullrank;
    rep.tp_active     = c.tp_active_possible() && detail::tp_flag(rep.q_opt, c);
    rep.pap_active    = detail::pap_flags(rep.q_opt, c);
    rep.kkt_residual  = kkt_residual(h, c, rep.q_opt);
    rep.iterations    = dual.iterations;
    rep.n_var         = static_cast<int>(h.n_t());
    rep.d_check       = DiagonalMultiplier(dual.d_check);
    rep.dual_trace    = std::move(dual.trace);
    rep.wall_time     = detail::elapsed_since(t0);
    return rep;
}

} // namespace mimocap
