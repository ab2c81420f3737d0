#include "mimocap/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <mutex>
#include <thread>

#include "mimocap/errors.hpp"
#include "mimocap/random.hpp"
#include "mimocap/solver_basic.hpp"
#include "mimocap/waterfill.hpp"

namespace mimocap
{

std::vector<double> linspace(double start, double stop, int count)
{
    if (count < 1)
        throw InputError("grid needs at least one point");
    std::vector<double> xs(static_cast<std::size_t>(count));
    if (count == 1)
    {
        xs[0] = start;
        return xs;
    }
    const double step = (stop - start) / (count - 1);
    for (int k = 0; k < count; ++k)
        xs[static_cast<std::size_t>(k)] = start + step * k;
    xs.back() = stop;
    return xs;
}

std::vector<SweepRow> run_sweep(const ChannelMatrix& h, const SweepSpec& spec,
                                const OptimSettings& s)
{
    const Index n = h.n_t();
    if (spec.variable == SweepVariable::ptot && spec.fixed_pap.size() != n)
        throw InputError("per-antenna bounds must have n_T = " + std::to_string(n) + " entries");

    std::vector<SweepRow> rows;
    for (double x : linspace(spec.start, spec.stop, spec.count))
    {
        const bool by_ptot = spec.variable == SweepVariable::ptot;
        const PowerConstraints c = by_ptot ? PowerConstraints(x, spec.fixed_pap)
                                           : PowerConstraints(spec.fixed_ptot, RVector::Constant(n, x));
        const SolveReport r = solve(h, c, spec.mode, s);

        SweepRow row;
        row.x = x;
        row.capacity_bits = nats_to_bits(r.capacity_nats);
        row.rank_q = r.q_opt.rank();
        row.tp_active = r.tp_active;
        if (spec.with_waterfill)
            row.waterfill_bits = nats_to_bits(waterfill_tp(h, c.p_tot()).capacity_nats);
        rows.push_back(row);
    }
    return rows;
}

namespace
{

struct TrialResult
{
    double basic_time = 0.0;
    double routed_time = 0.0;
    int basic_n_var = 0;
    int routed_n_var = 0;
    double gap = 0.0;
};

double seconds(std::chrono::nanoseconds t)
{
    return std::chrono::duration<double>(t).count();
}

TrialResult run_trial(int n, int k, std::uint64_t seed, const OptimSettings& s)
{
    Rng rng(seed + 1000003ULL * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(k));
    const ChannelMatrix h(random_gaussian_matrix(rng, n, n));
    RVector pap = RVector::Constant(n, 0.1);
    pap(0) = 1.0;
    const PowerConstraints c(1.0, pap);

    const SolveReport basic = solve_basic(h, c, s);
    const SolveReport routed = solve(h, c, SolveMode::auto_route, s);

    TrialResult t;
    t.basic_time = seconds(basic.wall_time);
    t.routed_time = seconds(routed.wall_time);
    t.basic_n_var = basic.n_var;
    t.routed_n_var = routed.n_var;
    t.gap = std::abs(routed.capacity_nats - basic.capacity_nats);
    return t;
}

double mean(const std::vector<double>& v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace

std::vector<BenchmarkRow> run_benchmark(const BenchmarkSpec& spec, const OptimSettings& s)
{
    if (spec.trials < 1)
        throw InputError("benchmark needs at least one trial");
    if (spec.threads < 1)
        throw InputError("benchmark needs at least one thread");
    for (int n : spec.sizes)
        if (n < 1)
            throw InputError("benchmark sizes must be positive");

    std::vector<BenchmarkRow> rows;
    for (int n : spec.sizes)
    {
        std::vector<TrialResult> results(static_cast<std::size_t>(spec.trials));
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (int k = next++; k < spec.trials; k = next++)
            {
                try
                {
                    results[static_cast<std::size_t>(k)] = run_trial(n, k, spec.seed, s);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        };
        const int workers = std::min(spec.threads, spec.trials);
        if (workers == 1)
            worker();
        else
        {
            std::vector<std::jthread> pool;
            for (int w = 0; w < workers; ++w)
                pool.emplace_back(worker);
        }
        if (failure)
            std::rethrow_exception(failure);

        std::vector<double> tb, tr, gaps;
        for (const auto& r : results)
        {
            tb.push_back(r.basic_time);
            tr.push_back(r.routed_time);
            gaps.push_back(r.gap);
        }
        const double gap = mean(gaps);
        rows.push_back({n, "basic", mean(tb), median(tb), results.front().basic_n_var, 0.0});
        rows.push_back({n, "reduced", mean(tr), median(tr), results.front().routed_n_var, gap});
    }
    return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw InputError("slope fit needs at least two matching points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw InputError("slope fit needs positive data");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const double mx = mean(lx);
    const double my = mean(ly);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i)
    {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0)
        throw InputError("slope fit needs distinct abscissae");
    return sxy / sxx;
}

} // namespace mimocap
