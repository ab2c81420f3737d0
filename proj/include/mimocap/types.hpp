#ifndef MIMOCAP_TYPES_HPP
#define MIMOCAP_TYPES_HPP

#include <chrono>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace mimocap
{

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index   = Eigen::Index;

/// Default absolute and relative tolerances shared by all modules.
inline constexpr double kAtol = 1e-9;
inline constexpr double kRtol = 1e-8;

///
/// Complex n_R x n_T channel matrix with its reduced SVD and numerical rank.
///
/// The rank is detected once at construction with the usual threshold
/// max(n_R, n_T) * eps * sigma_max. Every column must be nonzero.
///
class ChannelMatrix
{
public:
    explicit ChannelMatrix(CMatrix entries);

    const CMatrix& entries() const noexcept { return m_h; }
    Index n_r() const noexcept { return m_h.rows(); }
    Index n_t() const noexcept { return m_h.cols(); }

    /// Numerical rank nu.
    Index rank() const noexcept { return m_nu; }
    bool full_rank() const noexcept { return m_nu == n_t(); }

    /// Reduced SVD H = U diag(sigma) V^H with nu columns each.
    const CMatrix& u() const noexcept { return m_u; }
    const RVector& singular_values() const noexcept { return m_sigma; }
    const CMatrix& v() const noexcept { return m_v; }

    /// All min(n_R, n_T) singular values, descending.
    const RVector& all_singular_values() const noexcept { return m_sigma_all; }

    double frobenius_norm() const noexcept { return m_frob; }

    /// H^H H, computed once.
    const CMatrix& gramian() const noexcept { return m_gram; }

private:
    CMatrix m_h;
    CMatrix m_u;
    RVector m_sigma;
    RVector m_sigma_all;
    CMatrix m_v;
    CMatrix m_gram;
    Index m_nu = 0;
    double m_frob = 0.0;
};

/// Total power budget and per-antenna caps. Caps may be +inf.
class PowerConstraints
{
public:
    PowerConstraints(double p_tot, RVector pap);

    double p_tot() const noexcept { return m_p_tot; }
    const RVector& pap() const noexcept { return m_pap; }
    Index size() const noexcept { return m_pap.size(); }
    double pap_sum() const noexcept { return m_pap_sum; }

    /// True when the caps leave room to spend the full budget (sum P_i >= P_tot).
    bool tp_active_possible() const noexcept { return m_pap_sum >= m_p_tot; }

    /// Same caps with P_tot replaced by min(P_tot, sum P_i).
    PowerConstraints clamped() const;

private:
    double m_p_tot;
    RVector m_pap;
    double m_pap_sum;
};

///
/// Hermitian positive semidefinite input covariance.
///
/// Construction symmetrizes the argument to (Q + Q^H)/2 and rejects matrices
/// whose Hermitian defect or most negative eigenvalue exceeds the tolerance.
///
class CovarianceMatrix
{
public:
    explicit CovarianceMatrix(const CMatrix& q, double atol = kAtol);

    /// Zero matrix of the given order.
    static CovarianceMatrix zero(Index n);

    const CMatrix& entries() const noexcept { return m_q; }
    Index size() const noexcept { return m_q.rows(); }
    double trace() const { return m_q.trace().real(); }
    RVector diagonal() const { return m_q.diagonal().real(); }

    /// Number of eigenvalues above rel_tol * max(1, lambda_max).
    Index rank(double rel_tol = 1e-8) const;

private:
    CMatrix m_q;
};

/// Positive diagonal D-check = D^{-1}, the reduced variable of the full-rank
/// and singular solvers.
class DiagonalMultiplier
{
public:
    explicit DiagonalMultiplier(RVector d_check);

    const RVector& values() const noexcept { return m_d; }
    Index size() const noexcept { return m_d.size(); }

private:
    RVector m_d;
};

enum class SolverKind
{
    basic,
    fullrank,
    closedform,
    singular,
    unitrank,
    waterfill
};

std::string_view to_string(SolverKind kind) noexcept;

struct SolveReport
{
    double capacity_nats = 0.0;
    CovarianceMatrix q_opt = CovarianceMatrix::zero(0);
    SolverKind solver = SolverKind::basic;
    bool tp_active = false;
    std::vector<bool> pap_active;
    double kkt_residual = 0.0;
    int iterations = 0;
    std::chrono::nanoseconds wall_time{0};
    int n_var = 0;

    /// Set when a reduced solver did not converge and solve_basic produced the result.
    bool fell_back = false;

    /// Objective value after every accepted step of the primal ascent (basic solver).
    std::vector<double> objective_trace;

    /// Lagrange dual value after every multiplier update (reduced solvers). Nonincreasing,
    /// and an upper bound on the capacity.
    std::vector<double> dual_trace;

    /// Optimal D-check, for the solvers that compute one.
    std::optional<DiagonalMultiplier> d_check;
};

} // namespace mimocap

#endif
