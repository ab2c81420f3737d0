#include "mimocap/types.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mimocap/errors.hpp"
#include "mimocap/linalg.hpp"

namespace mimocap
{

ChannelMatrix::ChannelMatrix(CMatrix entries) : m_h(std::move(entries))
{
    if (m_h.rows() == 0 || m_h.cols() == 0)
    {
        throw InputError("channel matrix must be non-empty");
    }
    if (!m_h.allFinite())
    {
        throw InputError("channel matrix has non-finite entries");
    }
    for (Index j = 0; j < m_h.cols(); ++j)
    {
        if (m_h.col(j).norm() == 0.0)
        {
            throw DomainError("channel column " + std::to_string(j) +
                              " is zero: transmit antenna carries no signal");
        }
    }

    Eigen::JacobiSVD<CMatrix> svd(m_h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    m_sigma_all = svd.singularValues();
    const double thr =
        rank_threshold(m_h.rows(), m_h.cols(), m_sigma_all.size() ? m_sigma_all(0) : 0.0);
    m_nu = 0;
    while (m_nu < m_sigma_all.size() && m_sigma_all(m_nu) > thr)
    {
        ++m_nu;
    }
    m_u     = svd.matrixU().leftCols(m_nu);
    m_v     = svd.matrixV().leftCols(m_nu);
    m_sigma = m_sigma_all.head(m_nu);
    m_frob  = m_h.norm();
    m_gram  = hermitian_part(m_h.adjoint() * m_h);
}

PowerConstraints::PowerConstraints(double p_tot, RVector pap)
    : m_p_tot(p_tot), m_pap(std::move(pap))
{
    if (!(p_tot > 0.0) || !std::isfinite(p_tot))
    {
        throw InputError("total power must be positive and finite");
    }
    if (m_pap.size() == 0)
    {
        throw InputError("per-antenna bounds must be non-empty");
    }
    for (Index i = 0; i < m_pap.size(); ++i)
    {
        if (!(m_pap(i) > 0.0))
        {
            throw InputError("per-antenna bound " + std::to_string(i) + " must be positive");
        }
    }
    m_pap_sum = m_pap.sum();
}

PowerConstraints PowerConstraints::clamped() const
{
    return PowerConstraints(std::min(m_p_tot, m_pap_sum), m_pap);
}

CovarianceMatrix::CovarianceMatrix(const CMatrix& q, double atol)
{
    if (q.rows() != q.cols())
    {
        throw InputError("covariance matrix must be square");
    }
    if (!q.allFinite())
    {
        throw DomainError("covariance matrix has non-finite entries");
    }
    const double scale = std::max(1.0, q.norm());
    if ((q - q.adjoint()).norm() > atol * scale)
    {
        throw DomainError("covariance matrix is not Hermitian");
    }
    m_q = hermitian_part(q);
    if (m_q.size() > 0 && lambda_min(m_q) < -atol * scale)
    {
        throw DomainError("covariance matrix is not positive semidefinite");
    }
}

CovarianceMatrix CovarianceMatrix::zero(Index n)
{
    return CovarianceMatrix(CMatrix::Zero(n, n));
}

Index CovarianceMatrix::rank(double rel_tol) const
{
    if (m_q.size() == 0)
    {
        return 0;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_q, Eigen::EigenvaluesOnly);
    const RVector& ev = es.eigenvalues();
    const double thr  = rel_tol * std::max(1.0, ev.maxCoeff());
    return (ev.array() > thr).count();
}

DiagonalMultiplier::DiagonalMultiplier(RVector d_check) : m_d(std::move(d_check))
{
    for (Index i = 0; i < m_d.size(); ++i)
    {
        if (!(m_d(i) > 0.0) || !std::isfinite(m_d(i)))
        {
            throw DomainError("D-check entries must be positive and finite");
        }
    }
}

std::string_view to_string(SolverKind kind) noexcept
{
    switch (kind)
    {
        case SolverKind::basic:
            return "basic";
        case SolverKind::fullrank:
            return "fullrank";
        case SolverKind::closedform:
            return "closedform";
        case SolverKind::singular:
            return "singular";
        case SolverKind::unitrank:
            return "unitrank";
        case SolverKind::waterfill:
            return "waterfill";
    }
    return "unknown";
}

} // namespace mimocap
