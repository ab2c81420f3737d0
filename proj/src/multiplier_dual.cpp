#include "multiplier_dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "mimocap/linalg.hpp"

namespace mimocap::detail
{

namespace
{

// Eigenvalues of S G S within this distance of 1 are treated as clipped.
constexpr double kKink = 1e-12;

double clip_fn(double x)
{
    return x > 1.0 + kKink ? 1.0 - 1.0 / x : 0.0;
}

// Divided differences of clip_fn.
RMatrix divided_differences(const RVector& mu)
{
    const Index n = mu.size();
    RMatrix out(n, n);
    for (Index k = 0; k < n; ++k)
    {
        for (Index l = 0; l < n; ++l)
        {
            const bool ak = mu(k) > 1.0 + kKink;
            const bool al = mu(l) > 1.0 + kKink;
            if (ak && al)
            {
                out(k, l) = 1.0 / (mu(k) * mu(l));
            }
            else if (!ak && !al)
            {
                out(k, l) = 0.0;
            }
            else
            {
                out(k, l) = (clip_fn(mu(k)) - clip_fn(mu(l))) / (mu(k) - mu(l));
            }
        }
    }
    return out;
}

} // namespace

LagrangianMaximizer lagrangian_maximizer(const CMatrix& gram, const RVector& d_check)
{
    const RVector s = d_check.cwiseSqrt();
    const CMatrix a = hermitian_part(s.asDiagonal() * gram * s.asDiagonal());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);

    LagrangianMaximizer out;
    out.mu    = es.eigenvalues();
    out.basis = es.eigenvectors();
    RVector gvals(out.mu.size());
    out.psi = 0.0;
    for (Index k = 0; k < out.mu.size(); ++k)
    {
        gvals(k) = clip_fn(out.mu(k));
        if (gvals(k) > 0.0)
        {
            out.psi += std::log(out.mu(k)) - gvals(k);
        }
    }
    const CMatrix inner = out.basis * gvals.asDiagonal() * out.basis.adjoint();
    out.q = hermitian_part(s.asDiagonal() * inner * s.asDiagonal());
    return out;
}

RMatrix diag_jacobian(const CMatrix& gram, const RVector& d_check,
                      const LagrangianMaximizer& lm)
{
    const Index n   = d_check.size();
    const RVector s = d_check.cwiseSqrt();
    const CMatrix& u = lm.basis;
    const RMatrix gamma = divided_differences(lm.mu);

    RVector gdiag(n);
    {
        RVector gvals(n);
        for (Index k = 0; k < n; ++k)
        {
            gvals(k) = clip_fn(lm.mu(k));
        }
        gdiag = (u * gvals.asDiagonal() * u.adjoint()).diagonal().real();
    }
    const CMatrix sg = s.asDiagonal() * gram;

    // dQ_ii/ds_j = 2 delta_ij s_j g_jj + s_i^2 * 2 Re sum_kl (U_ik a_k) Gamma_kl conj(U_il b_l)
    // with a = U^H e_j and b = U^H (S G)_{:,j}.
    RMatrix jac(n, n);
    for (Index j = 0; j < n; ++j)
    {
        const CVector a = u.row(j).adjoint();
        const CVector b = u.adjoint() * sg.col(j);
        const CMatrix ua = u * a.asDiagonal();
        const CMatrix ub = u * b.asDiagonal();
        const CMatrix left = ua * gamma.cast<Complex>();
        const RVector dd = 2.0 * left.cwiseProduct(ub.conjugate()).rowwise().sum().real();
        const double ds_dd = -0.5 * s(j) * s(j) * s(j);
        for (Index i = 0; i < n; ++i)
        {
            double v = s(i) * s(i) * dd(i);
            if (i == j)
            {
                v += 2.0 * s(j) * gdiag(j);
            }
            jac(i, j) = v * ds_dd;
        }
    }
    return jac;
}

namespace
{

struct DualLayout
{
    bool with_tp = false;
    std::vector<Index> pap_index; // antenna of each Lambda variable
    RMatrix map;                  // d = map * z
    RVector lin;                  // linear term of the dual objective
};

DualLayout make_layout(const PowerConstraints& c)
{
    const Index n = c.size();
    DualLayout lay;
    lay.with_tp = c.p_tot() < c.pap_sum();
    for (Index i = 0; i < n; ++i)
    {
        if (std::isfinite(c.pap()(i)))
        {
            lay.pap_index.push_back(i);
        }
    }
    const Index m = (lay.with_tp ? 1 : 0) + static_cast<Index>(lay.pap_index.size());
    lay.map       = RMatrix::Zero(n, m);
    lay.lin       = RVector::Zero(m);
    Index col     = 0;
    if (lay.with_tp)
    {
        lay.map.col(0).setOnes();
        lay.lin(0) = c.p_tot();
        col        = 1;
    }
    for (Index i : lay.pap_index)
    {
        lay.map(i, col) = 1.0;
        lay.lin(col)    = c.pap()(i);
        ++col;
    }
    return lay;
}

struct DualPoint
{
    RVector z;
    RVector d;
    double value = std::numeric_limits<double>::infinity();
    LagrangianMaximizer lm;
};

bool evaluate(const CMatrix& gram, const DualLayout& lay, DualPoint& pt)
{
    pt.d = lay.map * pt.z;
    if (!(pt.d.array() > 0.0).all() || !pt.d.allFinite())
    {
        pt.value = std::numeric_limits<double>::infinity();
        return false;
    }
    pt.lm    = lagrangian_maximizer(gram, pt.d.cwiseInverse());
    pt.value = pt.lm.psi + lay.lin.dot(pt.z);
    return std::isfinite(pt.value);
}

} // namespace

DualResult minimize_dual(const CMatrix& gram, const PowerConstraints& c,
                         const RVector& d_check0, int max_iter)
{
    const DualLayout lay = make_layout(c);
    const Index m        = lay.map.cols();
    const double scale   = std::max(1.0, c.p_tot());
    const double tol     = 1e-13 * scale;
    const double accept  = 1e-9 * scale;
    constexpr double sigma = 1e-4;

    DualResult out;
    DualPoint cur;
    cur.z = RVector::Zero(m);
    if (lay.with_tp)
    {
        cur.z(0) = 1.0 / d_check0.mean();
    }
    else
    {
        for (Index k = 0; k < m; ++k)
        {
            cur.z(k) = 1.0 / d_check0(lay.pap_index[static_cast<std::size_t>(k)]);
        }
    }
    if (!evaluate(gram, lay, cur))
    {
        return out;
    }
    out.trace.push_back(cur.value);

    RVector grad(m);
    double pg_norm = std::numeric_limits<double>::infinity();
    int it         = 0;
    for (; it < max_iter; ++it)
    {
        grad    = lay.lin - lay.map.transpose() * cur.lm.q.diagonal().real();
        pg_norm = (cur.z - (cur.z - grad).cwiseMax(0.0)).cwiseAbs().maxCoeff();
        if (pg_norm <= tol)
        {
            break;
        }

        const RMatrix jac  = diag_jacobian(gram, cur.d.cwiseInverse(), cur.lm);
        const RMatrix hpsi = -0.5 * (jac + jac.transpose());
        const RMatrix hz   = lay.map.transpose() * hpsi * lay.map;

        // Variables pinned at zero by a positive gradient are moved by a
        // diagonally scaled step; the rest take a Newton step.
        const double eps = std::min(1e-8 * scale, pg_norm);
        std::vector<Index> free_idx;
        std::vector<bool> is_free(static_cast<std::size_t>(m), true);
        for (Index k = 0; k < m; ++k)
        {
            if (cur.z(k) <= eps && grad(k) > 0.0)
            {
                is_free[static_cast<std::size_t>(k)] = false;
            }
            else
            {
                free_idx.push_back(k);
            }
        }
        const double hscale = std::max(1e-300, hz.diagonal().cwiseAbs().maxCoeff());
        RVector dir(m);
        for (Index k = 0; k < m; ++k)
        {
            if (!is_free[static_cast<std::size_t>(k)])
            {
                dir(k) = -grad(k) / std::max(hz(k, k), 1e-12 * hscale);
            }
        }
        if (!free_idx.empty())
        {
            const Index f = static_cast<Index>(free_idx.size());
            RMatrix hff(f, f);
            RVector gf(f);
            for (Index a = 0; a < f; ++a)
            {
                gf(a) = grad(free_idx[static_cast<std::size_t>(a)]);
                for (Index b = 0; b < f; ++b)
                {
                    hff(a, b) = hz(free_idx[static_cast<std::size_t>(a)],
                                   free_idx[static_cast<std::size_t>(b)]);
                }
            }
            hff.diagonal().array() += 1e-12 * hscale;
            Eigen::LDLT<RMatrix> ldlt(hff);
            RVector pf = ldlt.solve(-gf);
            if (ldlt.info() != Eigen::Success || !pf.allFinite() || !(gf.dot(pf) < 0.0))
            {
                pf = -gf.cwiseQuotient(hff.diagonal().cwiseMax(1e-12 * hscale));
            }
            for (Index a = 0; a < f; ++a)
            {
                dir(free_idx[static_cast<std::size_t>(a)]) = pf(a);
            }
        }

        // Where Q vanishes the dual is linear and the Hessian carries no scale;
        // fall back to a gradient step no longer than the multipliers themselves.
        const double zscale = std::max(cur.z.cwiseAbs().maxCoeff(), 1e-12 * scale);
        if (!dir.allFinite() || dir.cwiseAbs().maxCoeff() > 1e3 * zscale)
        {
            dir = -grad * (zscale / grad.cwiseAbs().maxCoeff());
        }

        // Backtracking along the projection arc. A trial that drives some d_i
        // to zero is shortened so those entries keep half their current value.
        const RVector ddir = lay.map * dir;
        double alpha       = 1.0;
        bool accepted      = false;
        DualPoint trial;
        for (int bt = 0; bt < 100; ++bt)
        {
            trial.z = (cur.z + alpha * dir).cwiseMax(0.0);
            if (!evaluate(gram, lay, trial))
            {
                double next = 0.5 * alpha;
                for (Index i = 0; i < ddir.size(); ++i)
                {
                    if (!(trial.d(i) > 0.0) && ddir(i) < 0.0)
                    {
                        next = std::min(next, 0.5 * cur.d(i) / -ddir(i));
                    }
                }
                alpha = next;
                continue;
            }
            const RVector step    = trial.z - cur.z;
            const double expected = sigma * grad.dot(step);
            // Convexity bounds the decrease by the trial gradient, which stays
            // informative once value differences fall below rounding.
            const RVector tgrad = lay.lin - lay.map.transpose() * trial.lm.q.diagonal().real();
            const bool certified = expected < 0.0 && tgrad.dot(step) <= expected;
            if (trial.value <= cur.value + expected || certified)
            {
                trial.value = std::min(trial.value, cur.value);
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted)
        {
            break;
        }
        const bool stalled = (trial.z - cur.z).cwiseAbs().maxCoeff() == 0.0;
        cur                = std::move(trial);
        out.trace.push_back(cur.value);
        if (stalled)
        {
            break;
        }
    }

    grad    = lay.lin - lay.map.transpose() * cur.lm.q.diagonal().real();
    pg_norm = (cur.z - (cur.z - grad).cwiseMax(0.0)).cwiseAbs().maxCoeff();

    out.d_check            = cur.d.cwiseInverse();
    out.q                  = cur.lm.q;
    out.tp_multiplier      = lay.with_tp ? cur.z(0) : 0.0;
    out.pap_multipliers    = RVector::Zero(c.size());
    const Index off        = lay.with_tp ? 1 : 0;
    for (std::size_t k = 0; k < lay.pap_index.size(); ++k)
    {
        out.pap_multipliers(lay.pap_index[k]) = cur.z(off + static_cast<Index>(k));
    }
    out.projected_gradient = pg_norm;
    out.converged          = pg_norm <= accept;
    out.iterations         = it;
    return out;
}

} // namespace mimocap::detail
