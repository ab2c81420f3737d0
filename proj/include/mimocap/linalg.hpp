#ifndef MIMOCAP_LINALG_HPP
#define MIMOCAP_LINALG_HPP

#include "mimocap/types.hpp"

namespace mimocap
{

/// (A + A^H) / 2.
CMatrix hermitian_part(const CMatrix& a);

/// Frobenius norm of A - A^H relative to max(1, ||A||).
double hermitian_defect(const CMatrix& a);

/// Smallest eigenvalue of a Hermitian matrix (0 for an empty matrix).
double lambda_min(const CMatrix& a);

/// log det(I + H Q H^H) in nats.
double mutual_information(const ChannelMatrix& h, const CovarianceMatrix& q);

/// Unchecked kernel of mutual_information for internal iterates.
double log_det_gain(const CMatrix& h, const CMatrix& q);

/// Gradient of log det(I + H Q H^H) with respect to Q: H^H (I + H Q H^H)^{-1} H.
CMatrix mutual_information_gradient(const CMatrix& h, const CMatrix& q);

/// U (Lambda)_+ U^H for A = U Lambda U^H. Throws DomainError if A is not Hermitian.
CMatrix positive_part_hermitian(const CMatrix& a);

/// K = (H^H H)^{1/2}. Throws DomainError when H is rank deficient.
CMatrix gramian_sqrt(const ChannelMatrix& h);

/// Count of singular values above max(n_R, n_T) * eps * sigma_max.
Index numerical_rank(const CMatrix& h);

/// Threshold used by numerical_rank for a given shape and largest singular value.
double rank_threshold(Index rows, Index cols, double sigma_max);

///
/// Aggregate violation of the KKT system of the joint TP/PAP program at q.
///
/// With G = H^H (I + H Q H^H)^{-1} H, the diagonal D = lambda I + Lambda is fit
/// row-wise by least squares from G Q = D Q on antennas carrying power, and
/// lambda is chosen to minimise the complementarity misfit. The result is
///
///   ||(D - G) Q|| + max(0, -lambda_min(D - G))
///   + sum_i |min(d_i - lambda, P_i - Q_ii)| + |min(lambda, P_tot - tr Q)|
///   + primal violations of the three constraints,
///
/// which is zero exactly at points satisfying the KKT system.
///
double kkt_residual(const ChannelMatrix& h, const PowerConstraints& c,
                    const CovarianceMatrix& q);

} // namespace mimocap

#endif
