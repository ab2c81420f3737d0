#ifndef MIMOCAP_EXPERIMENTS_HPP
#define MIMOCAP_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mimocap/dispatch.hpp"
#include "mimocap/optim.hpp"
#include "mimocap/types.hpp"

namespace mimocap
{

inline constexpr double kLog2E = 1.4426950408889634; ///< 1 / ln 2

inline double nats_to_bits(double nats) { return nats * kLog2E; }

/// count points from start to stop inclusive (count = 1 gives start).
std::vector<double> linspace(double start, double stop, int count);

enum class SweepVariable
{
    ptot,
    pap
};

struct SweepSpec
{
    SweepVariable variable = SweepVariable::ptot;
    double start = 0.0;
    double stop  = 1.0;
    int count    = 10;
    double fixed_ptot = 1.0; ///< used when sweeping the per-antenna bound
    RVector fixed_pap;       ///< used when sweeping the total power
    bool with_waterfill = false;
    SolveMode mode      = SolveMode::auto_route;
};

struct SweepRow
{
    double x = 0.0;
    double capacity_bits = 0.0;
    Index rank_q = 0;
    bool tp_active = false;
    std::optional<double> waterfill_bits;
};

/// Sweeping `pap` sets every per-antenna bound to x.
std::vector<SweepRow> run_sweep(const ChannelMatrix& h, const SweepSpec& spec,
                                const OptimSettings& s = {});

struct BenchmarkSpec
{
    std::vector<int> sizes{2, 4, 6, 8};
    int trials          = 10;
    std::uint64_t seed  = 1;
    int threads         = 1;
};

struct BenchmarkRow
{
    int n = 0;
    std::string solver;
    double mean_time   = 0.0; ///< seconds
    double median_time = 0.0; ///< seconds
    int n_var          = 0;
    double mean_capacity_gap = 0.0; ///< nats, versus the basic solver
};

///
/// n x n iid Rayleigh channels with P = diag(1, 0.1, ..., 0.1) and P_tot = 1.
/// Emits one row for the basic solver and one for the auto-routed solver per
/// size. Instance k of size n is drawn from Rng(seed + 1000003 n + k), so the
/// instances do not depend on the thread count.
///
std::vector<BenchmarkRow> run_benchmark(const BenchmarkSpec& spec, const OptimSettings& s = {});

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace mimocap

#endif
