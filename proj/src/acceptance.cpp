#include "mimocap/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "mimocap/dispatch.hpp"
#include "mimocap/experiments.hpp"
#include "mimocap/fixtures.hpp"
#include "mimocap/linalg.hpp"
#include "mimocap/random.hpp"
#include "mimocap/solver_basic.hpp"
#include "mimocap/solver_fullrank.hpp"
#include "mimocap/solver_singular.hpp"
#include "mimocap/waterfill.hpp"

namespace mimocap
{

namespace
{

struct Recorded
{
    std::string label;
    SolveReport report;
    Index n_t = 0;
    Index nu  = 0;
};

/// Shared state: every report produced by the criteria is kept so that the
/// cross-cutting checks (variable count, traces, KKT) can audit all of them.
class Suite
{
public:
    explicit Suite(const AcceptanceOptions& o) : opts(o) {}

    SolveReport keep(std::string label, const ChannelMatrix& h, SolveReport r)
    {
        recorded.push_back({std::move(label), r, h.n_t(), h.rank()});
        return r;
    }

    const AcceptanceOptions& opts;
    std::vector<Recorded> recorded;
    std::vector<std::pair<SolveReport, double>> fullrank_instances; ///< with P_tot
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds(std::chrono::nanoseconds t)
{
    return std::chrono::duration<double>(t).count();
}

RVector vec(std::initializer_list<double> xs)
{
    RVector v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (double x : xs)
        v(i++) = x;
    return v;
}

// Independent arithmetic for the variable count of each solver.
int variables(SolverKind kind, Index n_t, Index nu)
{
    const auto n = static_cast<int>(n_t);
    const auto r = static_cast<int>(nu);
    switch (kind)
    {
    case SolverKind::basic:
        return n * n;
    case SolverKind::fullrank:
    case SolverKind::closedform:
        return n;
    case SolverKind::singular:
    case SolverKind::unitrank:
        return 2 * (n - r) * r + n;
    case SolverKind::waterfill:
        return r;
    }
    return -1;
}

CriterionResult c1_fullrank_oracle(Suite& s)
{
    CriterionResult out;
    double worst_gap = 0.0, worst_time = 0.0;
    const std::pair<const char*, CMatrix> cases[] = {{"H3x3", fixtures::h3x3()},
                                                     {"H4x4", fixtures::h4x4()}};
    for (const auto& [name, m] : cases)
    {
        const ChannelMatrix h(m);
        const PowerConstraints c(static_cast<double>(h.n_t()), RVector::Ones(h.n_t()));
        const SolveReport red = s.keep(name, h, solve_fullrank(h, c, s.opts.settings));
        const SolveReport bas = s.keep(name, h, solve_basic(h, c, s.opts.settings));
        s.fullrank_instances.emplace_back(red, c.p_tot());
        s.fullrank_instances.emplace_back(bas, c.p_tot());
        worst_gap  = std::max(worst_gap, std::abs(red.capacity_nats - bas.capacity_nats));
        worst_time = std::max({worst_time, seconds(red.wall_time), seconds(bas.wall_time)});
    }
    out.passed = worst_gap <= 1e-5 && worst_time < 5.0;
    out.detail = "max |dC| " + fmt("%.2e", worst_gap) + " nats, slowest solve " +
                 fmt("%.3f", worst_time) + " s";
    return out;
}

CriterionResult c2_singular_oracle(Suite& s)
{
    CriterionResult out;
    const ChannelMatrix h(fixtures::h3x2());
    const RVector pap = vec({0.1, 0.1, 1.0});
    double worst      = 0.0;
    for (double pt : {0.2, 0.6, 1.0, 1.5})
    {
        const PowerConstraints c(pt, pap);
        const SolveReport red = s.keep("H3x2 singular", h, solve_singular(h, c, s.opts.settings));
        const SolveReport bas = s.keep("H3x2 basic", h, solve_basic(h, c, s.opts.settings));
        worst = std::max(worst, std::abs(red.capacity_nats - bas.capacity_nats));
        if (red.fell_back)
        {
            out.detail = "singular solver fell back at P_tot = " + fmt("%g", pt) + "; ";
            return out;
        }
    }
    out.passed = worst <= 1e-5;
    out.detail = "max |dC| " + fmt("%.2e", worst) + " nats over 4 budgets";
    return out;
}

CriterionResult c3_saturation(Suite& s)
{
    CriterionResult out;
    const RVector pap = vec({0.1, 0.1, 1.0});
    double worst      = 0.0;
    for (const CMatrix& m : {fixtures::h3x4(), fixtures::h3x2()})
    {
        const ChannelMatrix h(m);
        const SolveReport a = s.keep("sat 1.2", h, solve(h, PowerConstraints(1.2, pap),
                                                         SolveMode::auto_route, s.opts.settings,
                                                         s.opts.phase));
        const SolveReport b = s.keep("sat 1.5", h, solve(h, PowerConstraints(1.5, pap),
                                                         SolveMode::auto_route, s.opts.settings,
                                                         s.opts.phase));
        worst = std::max(worst, std::abs(a.capacity_nats - b.capacity_nats));
    }
    out.passed = worst <= 1e-6;
    out.detail = "max |C(1.5) - C(1.2)| " + fmt("%.2e", worst) + " nats";
    return out;
}

CriterionResult c4_rank_law(Suite& s)
{
    CriterionResult out;
    const RVector pap = vec({0.1, 0.1, 1.0});
    std::ostringstream detail;
    bool ok = true;
    for (const auto& [name, m] : {std::pair{"H3x4", fixtures::h3x4()},
                                  std::pair{"H3x2", fixtures::h3x2()}})
    {
        const ChannelMatrix h(m);
        Index prev = 0, lo = h.n_t(), hi = 0;
        for (double pt : linspace(0.05, 2.0, 40))
        {
            const SolveReport r = s.keep(std::string(name) + " sweep", h,
                                         solve(h, PowerConstraints(pt, pap), SolveMode::auto_route,
                                               s.opts.settings, s.opts.phase));
            const Index rk = r.q_opt.rank();
            ok = ok && rk >= 1 && rk <= h.rank() && rk >= prev;
            prev = rk;
            lo   = std::min(lo, rk);
            hi   = std::max(hi, rk);
        }
        detail << name << " rank " << lo << ".." << hi << " (nu " << h.rank() << ") ";
    }
    out.passed = ok;
    out.detail = detail.str();
    return out;
}

CriterionResult c5_unitrank(Suite& s)
{
    CriterionResult out;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(s.opts.seed * 7919 + 5);
    const int n_ts[] = {2, 3, 4, 6};
    const int n_rs[] = {1, 2, 4};
    double worst_gap = 0.0, worst_tr = 0.0, worst_cap = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 50; ++k)
    {
        const int nt = n_ts[k % 4];
        const int nr = n_rs[(k / 4) % 3];
        const ChannelMatrix h(random_rank_one_matrix(rng, nr, nt));
        RVector pap(nt);
        for (int i = 0; i < nt; ++i)
            pap(i) = rng.uniform(0.05, 1.5);
        const double pt = rng.uniform(0.2, 1.0) * pap.sum();
        const PowerConstraints c(pt, pap);

        const SolveReport u = s.keep("unitrank", h, solve_unitrank(h, c, s.opts.phase));
        const SolveReport b = s.keep("unitrank basic", h, solve_basic(h, c, s.opts.settings));
        const RVector d     = u.q_opt.diagonal();
        worst_gap = std::max(worst_gap, std::abs(u.capacity_nats - b.capacity_nats));
        worst_tr  = std::max(worst_tr, std::abs(d.sum() - pt));
        worst_cap = std::max(worst_cap, (d - pap).maxCoeff());
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.passed = worst_gap <= 1e-6 && worst_tr <= 1e-9 && worst_cap <= 1e-12 && total < 30.0;
    out.detail = "max |dC| " + fmt("%.2e", worst_gap) + ", max |sum|q|^2 - P_tot| " +
                 fmt("%.1e", worst_tr) + ", max(|q_i|^2 - P_i) " + fmt("%.1e", worst_cap) +
                 ", " + fmt("%.2f", total) + " s";
    return out;
}

CriterionResult c6_closed_form(Suite& s)
{
    CriterionResult out;
    Rng rng(s.opts.seed * 104729 + 6);
    double worst = 0.0;
    int found = 0, drawn = 0;
    while (found < 20 && drawn < 20000)
    {
        ++drawn;
        const int n = 2 + static_cast<int>(rng.uniform() * 3);
        const ChannelMatrix h(random_gaussian_matrix(rng, n, n));
        if (!h.full_rank())
            continue;
        RVector pap(n);
        for (int i = 0; i < n; ++i)
            pap(i) = rng.uniform(0.2, 4.0);
        const PowerConstraints probe(1.0, pap);
        const ClosedFormDiagnostics dg = closed_form_conditions(h, probe);
        const double pt = std::max(dg.lower_bound, 0.0) + rng.uniform(0.05, 3.0);
        const PowerConstraints c(pt, pap);
        if (!closed_form_conditions(h, c).holds)
            continue;
        ++found;
        const SolveReport cf  = s.keep("closedform", h, solve_closed_form(h, c));
        const SolveReport bas = s.keep("closedform basic", h, solve_basic(h, c, s.opts.settings));
        s.fullrank_instances.emplace_back(cf, pt);
        s.fullrank_instances.emplace_back(bas, pt);
        worst = std::max(worst, std::abs(cf.capacity_nats - bas.capacity_nats));
    }

    const ChannelMatrix h2(2.0 * CMatrix::Identity(2, 2));
    const SolveReport ex = s.keep("2I", h2, solve_closed_form(h2, PowerConstraints(1.0, RVector::Ones(2))));
    const double err = std::abs(nats_to_bits(ex.capacity_nats) - 2.0 * std::log2(3.0));

    out.passed = found == 20 && worst <= 1e-7 && err <= 1e-9;
    out.detail = std::to_string(found) + " instances from " + std::to_string(drawn) +
                 " draws, max |dC| " + fmt("%.2e", worst) + " nats; H = 2I error " +
                 fmt("%.1e", err) + " bits";
    return out;
}

CriterionResult c7_trace_equality(Suite& s)
{
    CriterionResult out;
    double worst = 0.0;
    for (const auto& [r, pt] : s.fullrank_instances)
        worst = std::max(worst, std::abs(r.q_opt.trace() - pt));
    out.passed = worst <= 1e-7 && !s.fullrank_instances.empty();
    out.detail = std::to_string(s.fullrank_instances.size()) + " solves, max |tr Q - P_tot| " +
                 fmt("%.1e", worst);
    return out;
}

CriterionResult c8_waterfill_limit(Suite& s)
{
    CriterionResult out;
    const ChannelMatrix h(fixtures::h3x3());
    const Index n = h.n_t();

    const SolveReport joint = s.keep("H3x3 P=10", h, solve(h, PowerConstraints(3.0, RVector::Constant(n, 10.0)),
                                                           SolveMode::auto_route, s.opts.settings,
                                                           s.opts.phase));
    const SolveReport wf = s.keep("H3x3 wf", h, waterfill_tp(h, 3.0));
    const double gap     = std::abs(joint.capacity_nats - wf.capacity_nats);

    // Smallest uniform bound whose capacity is within 1e-3 (relative) of the
    // water-filling value, expressed as a multiple of P_tot / n_T.
    auto required_ratio = [&](double pt) {
        const double target = waterfill_tp(h, pt).capacity_nats;
        auto short_of = [&](double x) {
            const SolveReport r = s.keep("H3x3 pap scan", h,
                                         solve(h, PowerConstraints(pt, RVector::Constant(n, x)),
                                               SolveMode::auto_route, s.opts.settings, s.opts.phase));
            return (target - r.capacity_nats) / target > 1e-3;
        };
        double lo = pt / static_cast<double>(n), hi = pt;
        if (!short_of(lo))
            return 1.0;
        for (int it = 0; it < 50; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (short_of(mid) ? lo : hi) = mid;
        }
        return hi / (pt / static_cast<double>(n));
    };
    const double r_small = required_ratio(0.03);
    const double r_large = required_ratio(3.0);

    out.passed = gap <= 1e-4 && r_small > r_large;
    out.detail = "|C(P=10) - C_wf| " + fmt("%.1e", gap) + " nats; required bound / (P_tot/n_T): " +
                 fmt("%.3f", r_small) + " at P_tot = 0.03 vs " + fmt("%.3f", r_large) + " at 3";
    return out;
}

CriterionResult c9_variable_count(Suite& s)
{
    CriterionResult out;
    int mismatches = 0, formulas = 0;
    for (int nt = 1; nt <= 16; ++nt)
    {
        for (int nu = 1; nu <= nt; ++nu)
        {
            int expected = nt;
            for (int i = 0; i < nu; ++i)
                expected += 2 * (nt - nu);
            ++formulas;
            if (n_var_for(nt, nu) != expected)
                ++mismatches;
        }
    }
    int bad_reports = 0;
    for (const auto& r : s.recorded)
        if (r.report.n_var != variables(r.report.solver, r.n_t, r.nu))
            ++bad_reports;
    out.passed = mismatches == 0 && bad_reports == 0;
    out.detail = std::to_string(formulas) + " (n_T, nu) pairs, " + std::to_string(mismatches) +
                 " mismatches; " + std::to_string(s.recorded.size()) + " reports, " +
                 std::to_string(bad_reports) + " inconsistent";
    return out;
}

CriterionResult c10_scaling(Suite& s)
{
    CriterionResult out;
    BenchmarkSpec spec;
    spec.sizes  = {2, 4, 6, 8};
    spec.trials = s.opts.benchmark_trials;
    spec.seed   = s.opts.seed;
    const std::vector<BenchmarkRow> rows = run_benchmark(spec, s.opts.settings);
    std::vector<double> ns, tb, tr;
    double gap = 0.0;
    for (const auto& r : rows)
    {
        if (r.solver == "basic")
        {
            ns.push_back(r.n);
            tb.push_back(r.mean_time);
        }
        else
        {
            tr.push_back(r.mean_time);
            gap = std::max(gap, r.mean_capacity_gap);
        }
    }
    const double sb = loglog_slope(ns, tb);
    const double sr = loglog_slope(ns, tr);
    out.passed = sr < sb && gap <= 1e-5;
    out.detail = "log-log slope reduced " + fmt("%.2f", sr) + " vs basic " + fmt("%.2f", sb) +
                 ", max mean |dC| " + fmt("%.1e", gap);
    return out;
}

CriterionResult c11_properties(Suite& s)
{
    CriterionResult out;
    std::ostringstream detail;
    bool ok = true;
    Rng rng(s.opts.seed * 15485863 + 11);

    // Gradient against central differences.
    {
        const CMatrix hm = random_gaussian_matrix(rng, 3, 4);
        const CMatrix a  = random_gaussian_matrix(rng, 4, 4);
        const CMatrix q  = a * a.adjoint() / 4.0 + 0.1 * CMatrix::Identity(4, 4);
        const CMatrix g  = mutual_information_gradient(hm, q);
        double worst     = 0.0;
        for (int k = 0; k < 20; ++k)
        {
            CMatrix dir = random_hermitian(rng, 4);
            dir /= dir.norm();
            const double step = 1e-5;
            const double fd   = (log_det_gain(hm, q + step * dir) - log_det_gain(hm, q - step * dir)) /
                              (2.0 * step);
            const double an = (g.adjoint() * dir).trace().real();
            worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
        }
        ok = ok && worst <= 1e-5;
        detail << "gradient rel err " << fmt("%.1e", worst) << "; ";
    }

    // Trace monotonicity and KKT at every recorded optimum.
    {
        int bad_trace = 0;
        double worst_kkt = 0.0;
        for (const auto& r : s.recorded)
        {
            const auto& pt = r.report.objective_trace;
            const auto& dt = r.report.dual_trace;
            for (std::size_t i = 1; i < pt.size(); ++i)
                if (pt[i] < pt[i - 1])
                    ++bad_trace;
            for (std::size_t i = 1; i < dt.size(); ++i)
                if (dt[i] > dt[i - 1])
                    ++bad_trace;
            if (r.report.solver != SolverKind::waterfill)
                worst_kkt = std::max(worst_kkt, r.report.kkt_residual);
        }
        ok = ok && bad_trace == 0 && worst_kkt <= 1e-6;
        detail << bad_trace << " trace reversals, max KKT " << fmt("%.1e", worst_kkt) << "; ";
    }

    // Projection feasibility.
    {
        double worst = 0.0;
        for (int k = 0; k < 20; ++k)
        {
            const int n = 2 + k % 4;
            const CMatrix y = 2.0 * random_hermitian(rng, n);
            RVector pap(n);
            for (int i = 0; i < n; ++i)
                pap(i) = rng.uniform(0.1, 1.0);
            const PowerConstraints c(rng.uniform(0.2, 1.0) * pap.sum(), pap);
            const CMatrix x = dykstra_project(y, c, s.opts.settings).entries();
            double v = std::max(0.0, -lambda_min(x));
            v = std::max(v, x.trace().real() - c.p_tot());
            v = std::max(v, (x.diagonal().real() - pap).maxCoeff());
            worst = std::max(worst, v);
        }
        ok = ok && worst <= s.opts.settings.feas_tol;
        detail << "projection violation " << fmt("%.1e", worst) << "; ";
    }

    // Capacity nondecreasing in P_tot and in each P_i.
    {
        int drops = 0;
        const ChannelMatrix h(fixtures::h3x3());
        auto check = [&](const std::function<PowerConstraints(double)>& make) {
            double prev = -std::numeric_limits<double>::infinity();
            for (double x : linspace(0.05, 3.0, 15))
            {
                const double cap = s.keep("monotone", h, solve(h, make(x), SolveMode::auto_route,
                                                               s.opts.settings, s.opts.phase))
                                       .capacity_nats;
                if (cap < prev - 1e-9)
                    ++drops;
                prev = cap;
            }
        };
        const RVector base = vec({0.4, 0.7, 1.0});
        check([&](double x) { return PowerConstraints(x, base); });
        for (Index i = 0; i < 3; ++i)
        {
            check([&](double x) {
                RVector p = base;
                p(i)      = x;
                return PowerConstraints(1.5, p);
            });
        }
        ok = ok && drops == 0;
        detail << drops << " capacity decreases";
    }

    out.passed = ok;
    out.detail = detail.str();
    return out;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts)
{
    Suite suite(opts);
    using Fn = CriterionResult (*)(Suite&);
    const std::pair<const char*, Fn> criteria[] = {
        {"oracle equivalence (full rank)", c1_fullrank_oracle},
        {"oracle equivalence (singular)", c2_singular_oracle},
        {"saturation at sum of per-antenna bounds", c3_saturation},
        {"rank law along the total-power sweep", c4_rank_law},
        {"unit-rank exactness", c5_unitrank},
        {"closed form", c6_closed_form},
        {"total-power equality (full rank)", c7_trace_equality},
        {"water-filling limit", c8_waterfill_limit},
        {"variable count", c9_variable_count},
        {"scaling trend", c10_scaling},
        {"property suites", c11_properties},
    };
    std::vector<CriterionResult> results;
    for (const auto& [name, fn] : criteria)
    {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try
        {
            r = fn(suite);
        }
        catch (const std::exception& e)
        {
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.id      = static_cast<int>(results.size()) + 1;
        r.name    = name;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    }
    return results;
}

std::string format_result(const CriterionResult& r)
{
    char head[96];
    std::snprintf(head, sizeof head, "%s %2d  %-40s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
    return std::string(head) + "  " + r.detail + " [" + fmt("%.2f", r.seconds) + " s]";
}

} // namespace mimocap
