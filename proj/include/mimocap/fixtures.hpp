#ifndef MIMOCAP_FIXTURES_HPP
#define MIMOCAP_FIXTURES_HPP

#include "mimocap/types.hpp"

/// Reference channel matrices printed with four decimals, shipped verbatim.
namespace mimocap::fixtures
{

/// 4 x 3 full-rank channel (n_R = 4, n_T = 3).
CMatrix h3x4();

/// 2 x 3 channel of rank 2 (n_R = 2, n_T = 3).
CMatrix h3x2();

/// 3 x 3 channel.
CMatrix h3x3();

/// 4 x 4 channel.
CMatrix h4x4();

} // namespace mimocap::fixtures

#endif
