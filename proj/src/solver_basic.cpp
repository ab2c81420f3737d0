#include "mimocap/solver_basic.hpp"

#include <algorithm>
#include <cmath>

#include "mimocap/errors.hpp"
#include "mimocap/linalg.hpp"
#include "report_util.hpp"

namespace mimocap
{

RealParamX::RealParamX(RMatrix x) : m_x(std::move(x))
{
    if (m_x.rows() != m_x.cols())
    {
        throw InputError("real parameterisation must be square");
    }
}

RealParamX encode_hermitian(const CMatrix& q)
{
    if (q.rows() != q.cols())
    {
        throw InputError("encode_hermitian needs a square matrix");
    }
    if (hermitian_defect(q) > kAtol)
    {
        throw DomainError("encode_hermitian needs a Hermitian matrix");
    }
    const Index n = q.rows();
    RMatrix x(n, n);
    for (Index i = 0; i < n; ++i)
    {
        x(i, i) = q(i, i).real();
        for (Index j = i + 1; j < n; ++j)
        {
            x(i, j) = q(i, j).real();
            x(j, i) = q(i, j).imag();
        }
    }
    return RealParamX(std::move(x));
}

CMatrix decode_hermitian(const RealParamX& xp)
{
    const RMatrix& x = xp.values();
    const RMatrix up = x.triangularView<Eigen::StrictlyUpper>();
    const RMatrix lo = x.triangularView<Eigen::StrictlyLower>();
    const RMatrix re = RMatrix(x.diagonal().asDiagonal()) + up + up.transpose();
    const RMatrix im = lo - lo.transpose();
    CMatrix q(x.rows(), x.cols());
    q.real() = re;
    // Im Q_ij for i < j is stored at X_ji, i.e. in (L - L^T)^T.
    q.imag() = im.transpose();
    return q;
}

CovarianceMatrix basic_start(const PowerConstraints& c)
{
    const Index n    = c.size();
    const double lvl = std::min(c.p_tot() / static_cast<double>(n), c.pap().minCoeff());
    return CovarianceMatrix(CMatrix::Identity(n, n) * lvl);
}

SolveReport solve_basic(const ChannelMatrix& h, const PowerConstraints& c,
                        const OptimSettings& s, const std::optional<CovarianceMatrix>& start)
{
    if (c.size() != h.n_t())
    {
        throw InputError("per-antenna bound count does not match n_T");
    }
    const auto t0 = detail::Clock::now();

    const CovarianceMatrix q0 = start ? *start : basic_start(c);
    if (q0.size() != h.n_t())
    {
        throw InputError("start point has the wrong order");
    }

    const CMatrix& hm = h.entries();
    ValueAndGradient fg = [&hm](const CMatrix& q) {
        return std::make_pair(log_det_gain(hm, q), mutual_information_gradient(hm, q));
    };
    // The Hessian of log det(I + H Q H^H) is bounded by sigma_max(H)^4.
    const double smax  = h.all_singular_values()(0);
    const double step0 = 1.0 / h.gramian().norm();

    AscentResult res = projected_gradient_ascent(fg, q0, c, s, step0, 1.0 / std::pow(smax, 4));

    SolveReport rep;
    rep.q_opt           = res.q;
    rep.capacity_nats   = std::max(0.0, res.value);
    rep.solver          = SolverKind::basic;
    rep.tp_active       = detail::tp_flag(res.q, c);
    rep.pap_active      = detail::pap_flags(res.q, c);
    rep.kkt_residual    = kkt_residual(h, c, res.q);
    rep.iterations      = res.iterations;
    rep.n_var           = static_cast<int>(h.n_t() * h.n_t());
    rep.objective_trace = std::move(res.trace);
    rep.wall_time       = detail::elapsed_since(t0);
    return rep;
}

} // namespace mimocap
