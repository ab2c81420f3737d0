#include <doctest.h>

#include "mimocap/dispatch.hpp"
#include "mimocap/experiments.hpp"
#include "mimocap/fixtures.hpp"
#include "mimocap/waterfill.hpp"
#include "support.hpp"

using namespace mimocap;

TEST_SUITE("experiments")
{
    TEST_CASE("unit conversion and grids")
    {
        CHECK(test::near(nats_to_bits(std::log(2.0)), 1.0, 1e-15));
        const auto g = linspace(0.1, 2.0, 20);
        REQUIRE(g.size() == 20);
        CHECK(g.front() == 0.1);
        CHECK(g.back() == 2.0);
        CHECK(test::near(g[1] - g[0], 0.1, 1e-15));
        CHECK(linspace(3.0, 5.0, 1) == std::vector<double>{3.0});
    }

    TEST_CASE("log-log slope of exact power laws")
    {
        const std::vector<double> x{2, 4, 6, 8};
        std::vector<double> y;
        for (double v : x)
            y.push_back(0.3 * v * v * v);
        CHECK(test::near(loglog_slope(x, y), 3.0, 1e-12));
    }

    TEST_CASE("total-power sweep saturates and raises the rank")
    {
        SweepSpec spec;
        spec.variable  = SweepVariable::ptot;
        spec.start     = 0.1;
        spec.stop      = 2.0;
        spec.count     = 20;
        spec.fixed_pap = RVector(3);
        spec.fixed_pap << 0.1, 0.1, 1.0;
        const auto rows = run_sweep(ChannelMatrix(fixtures::h3x2()), spec);
        REQUIRE(rows.size() == 20);
        double sat = -1;
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            if (i > 0)
            {
                CHECK(rows[i].rank_q >= rows[i - 1].rank_q);
                CHECK(rows[i].capacity_bits >= rows[i - 1].capacity_bits - 1e-9);
            }
            if (rows[i].x >= 1.2 - 1e-9)
            {
                if (sat < 0)
                    sat = rows[i].capacity_bits;
                CHECK(test::near(rows[i].capacity_bits, sat, 1e-8));
            }
            CHECK_FALSE(rows[i].waterfill_bits.has_value());
        }
        CHECK(rows.front().rank_q == 1);
        CHECK(rows.back().rank_q == 2);
    }

    TEST_CASE("per-antenna sweep approaches water-filling from below")
    {
        SweepSpec spec;
        spec.variable       = SweepVariable::pap;
        spec.start          = 0.5;
        spec.stop           = 10.0;
        spec.count          = 12;
        spec.fixed_ptot     = 3.0;
        spec.with_waterfill = true;
        const ChannelMatrix h(fixtures::h3x3());
        const auto rows = run_sweep(h, spec);
        const double wf = nats_to_bits(waterfill_tp(h, 3.0).capacity_nats);
        double prev_gap = 1e300;
        for (const auto& r : rows)
        {
            REQUIRE(r.waterfill_bits.has_value());
            CHECK(test::near(*r.waterfill_bits, wf, 1e-12));
            const double gap = *r.waterfill_bits - r.capacity_bits;
            CHECK(gap >= -1e-9);
            CHECK(gap <= prev_gap + 1e-9);
            prev_gap = gap;
        }
        CHECK(prev_gap <= 1e-4);
    }

    TEST_CASE("benchmark rows")
    {
        BenchmarkSpec spec;
        spec.sizes  = {2, 3};
        spec.trials = 3;
        const auto rows = run_benchmark(spec);
        REQUIRE(rows.size() == 4);
        for (const auto& r : rows)
        {
            CHECK(r.mean_time > 0.0);
            CHECK(r.median_time > 0.0);
            CHECK(r.n_var == (r.solver == "basic" ? r.n * r.n : r.n));
            CHECK(r.mean_capacity_gap <= 1e-5);
        }
        CHECK(rows[0].solver == "basic");
        CHECK(rows[1].solver == "reduced");

        spec.threads = 2;
        const auto threaded = run_benchmark(spec);
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            CHECK(threaded[i].n_var == rows[i].n_var);
            CHECK(threaded[i].mean_capacity_gap == rows[i].mean_capacity_gap);
        }
    }
}
