#include "mimocap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "mimocap/errors.hpp"

namespace mimocap
{

CMatrix hermitian_part(const CMatrix& a)
{
    return (a + a.adjoint()) * 0.5;
}

double hermitian_defect(const CMatrix& a)
{
    return (a - a.adjoint()).norm() / std::max(1.0, a.norm());
}

double lambda_min(const CMatrix& a)
{
    if (a.size() == 0)
    {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double log_det_gain(const CMatrix& h, const CMatrix& q)
{
    const Index n_r = h.rows();
    CMatrix m       = CMatrix::Identity(n_r, n_r) + h * q * h.adjoint();
    m               = hermitian_part(m);
    Eigen::LLT<CMatrix> llt(m);
    if (llt.info() == Eigen::Success)
    {
        const auto& l = llt.matrixLLT();
        double acc    = 0.0;
        for (Index i = 0; i < n_r; ++i)
        {
            acc += std::log(l(i, i).real());
        }
        return 2.0 * acc;
    }
    // Rounding pushed I + HQH^H off the PD cone; use eigenvalues.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    double acc = 0.0;
    for (Index i = 0; i < n_r; ++i)
    {
        acc += std::log(std::max(es.eigenvalues()(i), std::numeric_limits<double>::min()));
    }
    return acc;
}

double mutual_information(const ChannelMatrix& h, const CovarianceMatrix& q)
{
    if (q.size() != h.n_t())
    {
        throw InputError("covariance order does not match the number of transmit antennas");
    }
    return std::max(0.0, log_det_gain(h.entries(), q.entries()));
}

CMatrix mutual_information_gradient(const CMatrix& h, const CMatrix& q)
{
    const Index n_r = h.rows();
    CMatrix m = hermitian_part(CMatrix::Identity(n_r, n_r) + h * q * h.adjoint());
    Eigen::LDLT<CMatrix> ldlt(m);
    return hermitian_part(h.adjoint() * ldlt.solve(h));
}

CMatrix positive_part_hermitian(const CMatrix& a)
{
    if (a.rows() != a.cols())
    {
        throw InputError("positive part needs a square matrix");
    }
    if (hermitian_defect(a) > kAtol)
    {
        throw DomainError("positive part needs a Hermitian matrix");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
    const RVector clipped = es.eigenvalues().cwiseMax(0.0);
    return hermitian_part(es.eigenvectors() * clipped.asDiagonal() *
                          es.eigenvectors().adjoint());
}

CMatrix gramian_sqrt(const ChannelMatrix& h)
{
    if (!h.full_rank())
    {
        throw DomainError("gramian square root needs rank(H) = n_T");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.gramian());
    const RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return hermitian_part(es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint());
}

double rank_threshold(Index rows, Index cols, double sigma_max)
{
    return static_cast<double>(std::max(rows, cols)) *
           std::numeric_limits<double>::epsilon() * sigma_max;
}

Index numerical_rank(const CMatrix& h)
{
    if (h.size() == 0 || h.norm() == 0.0)
    {
        throw DomainError("numerical rank of an all-zero matrix");
    }
    Eigen::JacobiSVD<CMatrix> svd(h);
    const RVector& s = svd.singularValues();
    const double thr = rank_threshold(h.rows(), h.cols(), s(0));
    return (s.array() > thr).count();
}

namespace
{

struct KktPieces
{
    RVector d_fit;            // row-wise least-squares multipliers
    std::vector<bool> fitted; // rows carrying power
};

KktPieces fit_multipliers(const CMatrix& g, const CMatrix& q)
{
    const Index n    = q.rows();
    const CMatrix gq = g * q;
    const double thr = 1e-7 * std::max(1.0, q.norm());
    KktPieces out{RVector::Zero(n), std::vector<bool>(static_cast<std::size_t>(n), false)};
    for (Index i = 0; i < n; ++i)
    {
        const double rn2 = q.row(i).squaredNorm();
        if (std::sqrt(rn2) > thr)
        {
            out.d_fit(i) = (gq.row(i) * q.row(i).adjoint())(0, 0).real() / rn2;
            out.fitted[static_cast<std::size_t>(i)] = true;
        }
    }
    return out;
}

} // namespace

double kkt_residual(const ChannelMatrix& h, const PowerConstraints& c,
                    const CovarianceMatrix& q_in)
{
    const Index n = h.n_t();
    if (q_in.size() != n || c.size() != n)
    {
        throw InputError("kkt_residual: dimension mismatch");
    }
    const CMatrix& q = q_in.entries();
    const RVector qd = q.diagonal().real();
    const double tr  = qd.sum();

    // Primal violations.
    double viol = std::max(0.0, tr - c.p_tot()) + std::max(0.0, -lambda_min(q));
    for (Index i = 0; i < n; ++i)
    {
        viol += std::max(0.0, qd(i) - c.pap()(i));
    }
    const double infeasible_tol = 1e-6 * std::max(1.0, c.p_tot());
    if (viol > infeasible_tol)
    {
        throw DomainError("kkt_residual: covariance violates the constraints by " +
                          std::to_string(viol));
    }

    const CMatrix g       = mutual_information_gradient(h.entries(), q);
    const KktPieces fit   = fit_multipliers(g, q);
    const double tp_slack = c.p_tot() - tr;

    auto build_d = [&](double lam) {
        RVector d(n);
        for (Index i = 0; i < n; ++i)
        {
            d(i) = fit.fitted[static_cast<std::size_t>(i)] ? fit.d_fit(i) : lam;
        }
        return d;
    };

    auto misfit = [&](double lam) {
        double r = std::abs(std::min(lam, tp_slack));
        for (Index i = 0; i < n; ++i)
        {
            if (fit.fitted[static_cast<std::size_t>(i)])
            {
                r += std::abs(std::min(fit.d_fit(i) - lam, c.pap()(i) - qd(i)));
            }
        }
        const RVector d = build_d(lam);
        CMatrix m       = -g;
        m.diagonal() += d.cast<Complex>();
        r += std::max(0.0, -lambda_min(m));
        return r;
    };

    // The misfit is piecewise linear in lambda apart from the dual-feasibility
    // term; its minimum sits at one of these breakpoints.
    std::vector<double> candidates{0.0};
    if (std::isfinite(tp_slack))
    {
        candidates.push_back(std::max(0.0, tp_slack));
    }
    for (Index i = 0; i < n; ++i)
    {
        if (fit.fitted[static_cast<std::size_t>(i)])
        {
            candidates.push_back(fit.d_fit(i));
            const double s = c.pap()(i) - qd(i);
            if (std::isfinite(s))
            {
                candidates.push_back(fit.d_fit(i) - s);
            }
        }
    }
    // Unfitted rows may take any lambda; probe the gradient diagonal as well.
    for (Index i = 0; i < n; ++i)
    {
        candidates.push_back(g(i, i).real());
    }

    double best     = std::numeric_limits<double>::infinity();
    double best_lam = 0.0;
    for (double lam : candidates)
    {
        if (!(lam >= 0.0) || !std::isfinite(lam))
        {
            continue;
        }
        const double r = misfit(lam);
        if (r < best)
        {
            best     = r;
            best_lam = lam;
        }
    }

    const RVector d = build_d(best_lam);
    CMatrix m       = -g;
    m.diagonal() += d.cast<Complex>();
    const double stationarity = (m * q).norm();
    return stationarity + best + viol;
}

} // namespace mimocap
