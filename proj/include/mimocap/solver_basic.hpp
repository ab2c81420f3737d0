#ifndef MIMOCAP_SOLVER_BASIC_HPP
#define MIMOCAP_SOLVER_BASIC_HPP

#include <optional>

#include "mimocap/optim.hpp"
#include "mimocap/types.hpp"

namespace mimocap
{

///
/// Real n_T x n_T encoding of a Hermitian matrix:
/// X_ii = Q_ii, X_ij = Re Q_ij and X_ji = Im Q_ij for i < j, so that
/// Q = diag(X) + U(X) + U(X)^T - j [L(X) - L(X)^T].
///
class RealParamX
{
public:
    explicit RealParamX(RMatrix x);

    const RMatrix& values() const noexcept { return m_x; }

    /// Number of real parameters, n_T^2.
    Index count() const noexcept { return m_x.size(); }

private:
    RMatrix m_x;
};

RealParamX encode_hermitian(const CMatrix& q);
CMatrix decode_hermitian(const RealParamX& x);

/// Uniform feasible start min(P_tot / n_T, min_i P_i) I.
CovarianceMatrix basic_start(const PowerConstraints& c);

/// Projected gradient ascent directly on Q. Optionally starts from `start`.
SolveReport solve_basic(const ChannelMatrix& h, const PowerConstraints& c,
                        const OptimSettings& s = {},
                        const std::optional<CovarianceMatrix>& start = std::nullopt);

} // namespace mimocap

#endif
