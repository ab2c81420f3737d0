#ifndef MIMOCAP_RANDOM_HPP
#define MIMOCAP_RANDOM_HPP

#include <cstdint>
#include <random>

#include "mimocap/types.hpp"

namespace mimocap
{

///
/// Reproducible generator: std::mt19937_64 (fully specified by the C++
/// standard), 53-bit uniforms taken from the top bits of each draw, and
/// standard normals from the Box-Muller transform. Unlike the standard
/// distributions this gives identical sequences on every platform.
///
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : m_engine(seed) {}

    /// Uniform on [0, 1).
    double uniform();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal();

private:
    std::mt19937_64 m_engine;
    double m_spare = 0.0;
    bool m_has_spare = false;
};

/// iid circular complex Gaussian entries with unit variance (re, im ~ N(0, 1/2)).
CMatrix random_gaussian_matrix(Rng& rng, Index rows, Index cols);

/// u v^H scaled by a random gain, with u and v unit vectors.
CMatrix random_rank_one_matrix(Rng& rng, Index rows, Index cols);

/// Product of Gaussian factors of inner dimension `rank`.
CMatrix random_low_rank_matrix(Rng& rng, Index rows, Index cols, Index rank);

/// Random Hermitian matrix with iid Gaussian entries above the diagonal.
CMatrix random_hermitian(Rng& rng, Index n);

} // namespace mimocap

#endif
