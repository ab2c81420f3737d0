#include <doctest.h>

#include "mimocap/dispatch.hpp"
#include "mimocap/errors.hpp"
#include "mimocap/fixtures.hpp"
#include "mimocap/random.hpp"
#include "mimocap/solver_fullrank.hpp"
#include "mimocap/solver_singular.hpp"
#include "mimocap/waterfill.hpp"
#include "support.hpp"

using namespace mimocap;

namespace
{

RVector uneven_caps()
{
    RVector p(3);
    p << 0.1, 0.1, 1.0;
    return p;
}

RVector random_caps(Rng& rng, Index n)
{
    RVector p(n);
    for (Index i = 0; i < n; ++i)
        p(i) = rng.uniform(0.05, 1.5);
    return p;
}

} // namespace

TEST_SUITE("dispatch")
{
    TEST_CASE("mode names round trip")
    {
        for (SolveMode m : {SolveMode::auto_route, SolveMode::basic, SolveMode::fullrank, SolveMode::singular,
                            SolveMode::unitrank, SolveMode::closedform, SolveMode::waterfill})
        {
            const auto back = parse_mode(to_string(m));
            REQUIRE(back.has_value());
            CHECK(*back == m);
        }
        CHECK(to_string(SolveMode::auto_route) == "auto");
        CHECK_FALSE(parse_mode("newton").has_value());
    }

    TEST_CASE("printed channels route by rank")
    {
        const PowerConstraints c(1.0, uneven_caps());
        const ChannelMatrix full(fixtures::h3x4());
        REQUIRE_FALSE(closed_form_conditions(full, c).holds);
        CHECK(route(full, c) == SolverKind::fullrank);
        CHECK(solve(full, c).solver == SolverKind::fullrank);
        CHECK(route(ChannelMatrix(fixtures::h3x2()), c) == SolverKind::singular);
        CHECK(solve(ChannelMatrix(fixtures::h3x2()), c).solver == SolverKind::singular);

        const PowerConstraints cf(1.0, RVector::Ones(2));
        CHECK(route(ChannelMatrix(2.0 * CMatrix::Identity(2, 2)), cf) == SolverKind::closedform);
    }

    TEST_CASE("outer products route to the unit-rank solver")
    {
        Rng rng(157);
        for (int k = 0; k < 10; ++k)
        {
            const ChannelMatrix h(random_rank_one_matrix(rng, 1 + k % 4, 2 + k % 3));
            const PowerConstraints c(0.5, random_caps(rng, h.n_t()));
            CHECK(route(h, c) == SolverKind::unitrank);
            CHECK(solve(h, c).solver == SolverKind::unitrank);
        }
    }

    TEST_CASE("forced modes check their preconditions")
    {
        const ChannelMatrix full(fixtures::h3x3());
        const ChannelMatrix sing(fixtures::h3x2());
        const PowerConstraints c(1.0, RVector::Ones(3));
        CHECK_THROWS_AS(solve(full, c, SolveMode::unitrank), RoutingError);
        CHECK_THROWS_AS(solve(full, c, SolveMode::singular), RoutingError);
        CHECK_THROWS_AS(solve(sing, c, SolveMode::fullrank), RoutingError);
        CHECK_THROWS_AS(solve(sing, c, SolveMode::closedform), RoutingError);
        CHECK_THROWS_AS(solve(ChannelMatrix(2.0 * CMatrix::Identity(2, 2)), PowerConstraints(3.0, RVector::Ones(2)),
                              SolveMode::closedform),
                        RoutingError);
        CHECK(solve(full, c, SolveMode::basic).solver == SolverKind::basic);
        CHECK(solve(sing, c, SolveMode::basic).solver == SolverKind::basic);
        CHECK(solve(full, c, SolveMode::fullrank).solver == SolverKind::fullrank);
        CHECK_THROWS_AS(solve(full, PowerConstraints(1.0, RVector::Ones(2))), InputError);
    }

    TEST_CASE("water-filling mode ignores the per-antenna bounds")
    {
        const ChannelMatrix h(fixtures::h3x3());
        const SolveReport tight = solve(h, PowerConstraints(2.0, RVector::Constant(3, 0.01)), SolveMode::waterfill);
        const SolveReport loose = solve(h, PowerConstraints(2.0, RVector::Constant(3, 10.0)), SolveMode::waterfill);
        CHECK(tight.solver == SolverKind::waterfill);
        CHECK(test::near(tight.capacity_nats, loose.capacity_nats, 1e-15));
        CHECK(test::near(tight.capacity_nats, waterfill_tp(h, 2.0).capacity_nats, 1e-15));
    }

    TEST_CASE("auto reports carry the variable count of their route")
    {
        Rng rng(163);
        for (int k = 0; k < 12; ++k)
        {
            const Index n  = 2 + k % 4;
            const Index nu = 1 + k % n;
            const ChannelMatrix h(random_low_rank_matrix(rng, n, n, nu));
            const PowerConstraints c(rng.uniform(0.2, 1.0), random_caps(rng, n));
            const SolveReport r = solve(h, c);
            const int ni = static_cast<int>(n);
            const int vi = static_cast<int>(h.rank());
            CHECK(r.n_var == 2 * (ni - vi) * vi + ni);
            CHECK(r.n_var == expected_n_var(r.solver, ni, vi));
        }
    }

    TEST_CASE("cross validation: random full-rank 3x3")
    {
        Rng rng(167);
        double worst = 0.0;
        for (int k = 0; k < 30; ++k)
        {
            const ChannelMatrix h(random_gaussian_matrix(rng, 3, 3));
            const RVector p = random_caps(rng, 3);
            const CrossValidation cv = cross_validate(h, PowerConstraints(rng.uniform(0.1, 1.2) * p.sum(), p));
            worst = std::max(worst, cv.capacity_gap);
            CHECK(cv.basic.solver == SolverKind::basic);
            CHECK(test::near(cv.capacity_gap, std::abs(cv.routed.capacity_nats - cv.basic.capacity_nats), 0.0));
        }
        CHECK(worst <= 1e-5);
    }

    TEST_CASE("cross validation: random rank-one 4x2")
    {
        Rng rng(173);
        double worst = 0.0;
        for (int k = 0; k < 30; ++k)
        {
            const ChannelMatrix h(random_rank_one_matrix(rng, 4, 2));
            const RVector p = random_caps(rng, 2);
            const CrossValidation cv = cross_validate(h, PowerConstraints(rng.uniform(0.1, 1.2) * p.sum(), p));
            CHECK(cv.routed.solver == SolverKind::unitrank);
            worst = std::max(worst, cv.capacity_gap);
        }
        CHECK(worst <= 1e-6);
    }

    TEST_CASE("cross validation: identity channels")
    {
        for (Index n = 1; n <= 5; ++n)
        {
            for (double pt : {0.5, 1.0, static_cast<double>(n), 2.0 * static_cast<double>(n)})
            {
                const CrossValidation cv =
                    cross_validate(ChannelMatrix(CMatrix::Identity(n, n)), PowerConstraints(pt, RVector::Ones(n)));
                CHECK(cv.capacity_gap <= 1e-9);
                const double per = std::min(pt, static_cast<double>(n)) / static_cast<double>(n);
                CHECK(test::near(cv.routed.capacity_nats, static_cast<double>(n) * std::log1p(per), 1e-9));
            }
        }
    }
}
