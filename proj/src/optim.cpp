#include "mimocap/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "mimocap/errors.hpp"
#include "mimocap/linalg.hpp"

namespace mimocap
{

void OptimSettings::validate() const
{
    if (max_iter < 1 || dykstra_max_sweeps < 1 || max_newton_iter < 1)
    {
        throw InputError("optimizer budgets must be at least 1");
    }
    if (!(obj_tol > 0.0) || !(feas_tol > 0.0))
    {
        throw InputError("optimizer tolerances must be positive");
    }
    if (!(armijo_c > 0.0 && armijo_c < 1.0) || !(armijo_shrink > 0.0 && armijo_shrink < 1.0))
    {
        throw InputError("Armijo parameters must lie in (0, 1)");
    }
    if (!(init_alpha < 1.0))
    {
        throw InputError("D-check start parameter alpha must be below 1");
    }
}

CMatrix project_psd(const CMatrix& q)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(q));
    if (es.eigenvalues()(0) >= 0.0)
    {
        return hermitian_part(q);
    }
    const RVector clipped = es.eigenvalues().cwiseMax(0.0);
    return hermitian_part(es.eigenvectors() * clipped.asDiagonal() *
                          es.eigenvectors().adjoint());
}

CMatrix project_diag_cap(const CMatrix& q, const RVector& pap)
{
    if (pap.size() != q.rows())
    {
        throw InputError("per-antenna bound count does not match the matrix order");
    }
    CMatrix out = q;
    for (Index i = 0; i < q.rows(); ++i)
    {
        const double qii = q(i, i).real();
        out(i, i)        = Complex(std::min(qii, pap(i)), 0.0);
    }
    return out;
}

CMatrix project_trace_cap(const CMatrix& q, double p_tot)
{
    const double tr = q.trace().real();
    if (tr <= p_tot)
    {
        return q;
    }
    CMatrix out = q;
    out.diagonal().array() -= Complex((tr - p_tot) / static_cast<double>(q.rows()), 0.0);
    return out;
}

namespace
{

// Largest violation of the three constraint sets.
double violation(const CMatrix& q, const PowerConstraints& c)
{
    double v = std::max(0.0, -lambda_min(q));
    v        = std::max(v, q.trace().real() - c.p_tot());
    for (Index i = 0; i < q.rows(); ++i)
    {
        v = std::max(v, q(i, i).real() - c.pap()(i));
    }
    return v;
}

} // namespace

CovarianceMatrix dykstra_project(const CMatrix& q, const PowerConstraints& c,
                                 const OptimSettings& s)
{
    if (q.rows() != q.cols() || q.rows() != c.size())
    {
        throw InputError("dykstra_project: dimension mismatch");
    }
    if (hermitian_defect(q) > kAtol)
    {
        throw DomainError("dykstra_project needs a Hermitian matrix");
    }
    const Index n = q.rows();
    CMatrix x     = hermitian_part(q);
    CMatrix p1    = CMatrix::Zero(n, n);
    CMatrix p2    = CMatrix::Zero(n, n);
    CMatrix p3    = CMatrix::Zero(n, n);

    for (int sweep = 0; sweep < s.dykstra_max_sweeps; ++sweep)
    {
        const CMatrix y1 = project_psd(x + p1);
        p1 += x - y1;
        const CMatrix y2 = project_diag_cap(y1 + p2, c.pap());
        p2 += y1 - y2;
        const CMatrix y3 = project_trace_cap(y2 + p3, c.p_tot());
        p3 += y2 - y3;

        // The iterate can pause for a sweep while the corrections still move,
        // so every stage of the cycle has to be at rest.
        const double change =
            std::max({(x - y1).norm(), (y1 - y2).norm(), (y2 - y3).norm()});
        x = y3;
        if (change <= s.feas_tol && violation(x, c) <= s.feas_tol)
        {
            return CovarianceMatrix(x, std::max(kAtol, s.feas_tol));
        }
    }
    throw ConvergenceError("Dykstra projection did not converge within " +
                               std::to_string(s.dykstra_max_sweeps) + " sweeps",
                           x);
}

namespace
{

double inner(const CMatrix& a, const CMatrix& b)
{
    return (a.adjoint() * b).trace().real();
}

} // namespace

AscentResult projected_gradient_ascent(const ValueAndGradient& f,
                                       const CovarianceMatrix& start,
                                       const PowerConstraints& c,
                                       const OptimSettings& s,
                                       double initial_step,
                                       double safe_step)
{
    s.validate();
    if (!(initial_step > 0.0) || !std::isfinite(initial_step) || !(safe_step > 0.0) ||
        !std::isfinite(safe_step))
    {
        throw InputError("step lengths must be positive");
    }

    CMatrix q         = start.entries();
    auto [val, grad]  = f(q);
    const double tmin = std::min(safe_step, initial_step);
    const double tmax = initial_step * 1e3;
    double t          = initial_step;

    AscentResult out;
    out.trace.push_back(val);
    double best_pg = std::numeric_limits<double>::infinity();
    int stalled    = 0;
    // Working copy whose projection tolerance tightens when progress stalls.
    OptimSettings ws        = s;
    const double feas_floor = std::max(1e-3 * s.feas_tol, 1e-16);

    // Fixed-step projected gradient norm; zero exactly at stationary points.
    auto stationarity = [&](const CMatrix& at, const CMatrix& g) {
        const CMatrix p = dykstra_project(at + initial_step * g, c, ws).entries();
        return (p - at).norm() / initial_step;
    };

    for (int it = 1; it <= s.max_iter; ++it)
    {
        double t_try = t;
        CMatrix cand;
        double cand_val = 0.0;
        CMatrix cand_grad;
        bool accepted = false;
        for (int bt = 0; bt < 200 && !accepted; ++bt)
        {
            try
            {
                cand = dykstra_project(q + t_try * grad, c, ws).entries();
            }
            catch (const ConvergenceError&)
            {
                // Far-out trial points can project very slowly; shorten instead.
                t_try = std::max(t_try * s.armijo_shrink, safe_step);
                continue;
            }
            auto [fv, fg] = f(cand);
            if (!std::isfinite(fv))
            {
                t_try *= s.armijo_shrink;
                continue;
            }
            const double sufficient = s.armijo_c * inner(grad, cand - q);
            // Concavity gives f(cand) - f(q) >= <grad f(cand), cand - q>, which
            // stays accurate where the difference of two values cancels. Steps no
            // longer than safe_step ascend whatever the rounding in fv.
            const bool certified = sufficient > 0.0 && inner(fg, cand - q) >= sufficient;
            if ((fv >= val + sufficient && fv >= val) || certified || t_try <= safe_step)
            {
                cand_val  = std::max(fv, val);
                cand_grad = std::move(fg);
                accepted  = true;
                break;
            }
            t_try = std::max(t_try * s.armijo_shrink, safe_step);
        }
        if (!accepted)
        {
            throw StepError("line search failed at iteration " + std::to_string(it));
        }

        const CMatrix step  = cand - q;
        const CMatrix delta = cand_grad - grad;
        const double rel    = (cand_val - val) / std::max(1.0, std::abs(val));

        // Barzilai-Borwein step for a concave objective: <s, y> <= 0.
        const double sy = inner(step, delta);
        const double ss = step.squaredNorm();
        t = (sy < 0.0 && ss > 0.0) ? std::clamp(ss / -sy, tmin, tmax)
                                   : std::clamp(2.0 * t_try, tmin, tmax);

        q    = std::move(cand);
        val  = cand_val;
        grad = std::move(cand_grad);
        out.trace.push_back(val);
        out.iterations = it;

        if (rel > s.obj_tol)
        {
            continue;
        }
        const double scale = std::max(1.0, grad.norm());
        const double pg    = stationarity(q, grad);
        if (pg < best_pg)
        {
            best_pg = pg;
            stalled = 0;
        }
        else
        {
            ++stalled;
        }
        // Near the rounding floor the projected gradient stops shrinking, and on
        // ill-conditioned channels it shrinks slowly; accept a looser level once
        // it has stalled or the budget is spent.
        const bool loose = stalled >= 100 || it == s.max_iter;
        if (pg <= 1e-10 * scale || (pg <= 1e-8 * scale && loose))
        {
            out.q     = CovarianceMatrix(q, std::max(kAtol, 10.0 * s.feas_tol));
            out.value = val;
            return out;
        }
        // An inexact projection can cycle at corners where several constraints
        // are active at once.
        if (stalled >= 100 && ws.feas_tol > feas_floor)
        {
            ws.feas_tol = std::max(0.1 * ws.feas_tol, feas_floor);
            best_pg     = std::numeric_limits<double>::infinity();
            stalled     = 0;
        }
    }
    throw ConvergenceError("projected gradient ascent hit max_iter", q);
}

} // namespace mimocap
