#include <doctest.h>

#include "mimocap/errors.hpp"
#include "mimocap/fixtures.hpp"
#include "mimocap/linalg.hpp"
#include "mimocap/random.hpp"
#include "mimocap/solver_basic.hpp"
#include "mimocap/solver_singular.hpp"
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

} // namespace

TEST_SUITE("solver_singular")
{
    TEST_CASE("variable count examples")
    {
        CHECK(n_var_for(4, 2) == 12);
        CHECK(n_var_for(3, 1) == 7);
        for (int n = 1; n <= 16; ++n)
            CHECK(n_var_for(n, n) == n);
        CHECK_THROWS_AS(n_var_for(3, 0), InputError);
        CHECK_THROWS_AS(n_var_for(3, 4), InputError);
    }

    TEST_CASE("coupling residual vanishes when both sides vanish")
    {
        const ChannelMatrix h(fixtures::h3x2());
        const double smax = h.singular_values()(0);
        const DiagonalMultiplier d(RVector::Constant(3, 0.5 / (smax * smax)));
        CHECK(coupling_residual(h, d, CovarianceMatrix::zero(3)) < 1e-14);
        CHECK_THROWS_AS(coupling_residual(h, d, CovarianceMatrix::zero(2)), InputError);
    }

    TEST_CASE("fixture solves: oracle agreement, coupling and rank bound")
    {
        const ChannelMatrix h(fixtures::h3x2());
        for (double pt : {0.2, 0.6, 1.0, 1.5})
        {
            const PowerConstraints c(pt, uneven_caps());
            const SolveReport r = solve_singular(h, c);
            CHECK(r.solver == SolverKind::singular);
            CHECK_FALSE(r.fell_back);
            CHECK(r.n_var == 2 * (3 - 2) * 2 + 3);
            CHECK(test::near(r.capacity_nats, solve_basic(h, c).capacity_nats, 1e-5));
            REQUIRE(r.d_check.has_value());
            CHECK(coupling_residual(h, *r.d_check, r.q_opt) <= 1e-7);
            CHECK(r.q_opt.rank() >= 1);
            CHECK(r.q_opt.rank() <= 2);
            CHECK(r.kkt_residual <= 1e-6);
        }
    }

    TEST_CASE("coupling residual grows linearly under perturbation")
    {
        const ChannelMatrix h(fixtures::h3x2());
        const SolveReport r = solve_singular(h, PowerConstraints(1.0, uneven_caps()));
        Rng rng(107);
        const CMatrix w   = random_hermitian(rng, 2);
        const CMatrix dir = h.v() * w * h.v().adjoint();
        const double r1   = coupling_residual(h, *r.d_check, CovarianceMatrix(r.q_opt.entries() + 1e-4 * dir, 1.0));
        const double r2   = coupling_residual(h, *r.d_check, CovarianceMatrix(r.q_opt.entries() + 2e-4 * dir, 1.0));
        CHECK(r1 > 1e-6);
        CHECK(test::near(r2 / r1, 2.0, 1e-2));
    }

    TEST_CASE("saturation and rank growth along the total-power sweep")
    {
        const ChannelMatrix h(fixtures::h3x2());
        const double saturated = solve_singular(h, PowerConstraints(1.2, uneven_caps())).capacity_nats;
        Index prev_rank        = 0;
        double prev_cap        = -1.0;
        for (int i = 1; i <= 20; ++i)
        {
            const double pt     = 0.1 * i;
            const SolveReport r = solve_singular(h, PowerConstraints(pt, uneven_caps()));
            CHECK(r.q_opt.rank() >= prev_rank);
            CHECK(r.capacity_nats >= prev_cap - 1e-9);
            if (pt >= 1.2 - 1e-12)
            {
                CHECK(test::near(r.capacity_nats, saturated, 1e-9));
                CHECK_FALSE(r.tp_active);
            }
            prev_rank = r.q_opt.rank();
            prev_cap  = r.capacity_nats;
        }
        CHECK(solve_singular(h, PowerConstraints(0.05, uneven_caps())).q_opt.rank() == 1);
        CHECK(prev_rank == 2);
    }

    TEST_CASE("random rank-deficient channels against the oracle")
    {
        Rng rng(109);
        for (int k = 0; k < 15; ++k)
        {
            const Index n  = 3 + k % 3;
            const Index nu = 2 + k % (n - 2);
            const ChannelMatrix h(random_low_rank_matrix(rng, n, n, nu));
            REQUIRE(h.rank() == nu);
            RVector p(n);
            for (Index i = 0; i < n; ++i)
                p(i) = rng.uniform(0.05, 1.5);
            const PowerConstraints c(rng.uniform(0.1, 1.2) * p.sum(), p);
            const SolveReport r = solve_singular(h, c);
            CHECK(test::near(r.capacity_nats, solve_basic(h, c).capacity_nats, 1e-5));
            CHECK(r.q_opt.rank() <= nu);
            CHECK(r.n_var == n_var_for(static_cast<int>(n), static_cast<int>(nu)));
            CHECK(coupling_residual(h, *r.d_check, r.q_opt) <= 1e-7);
            if (!r.tp_active)
            {
                const PowerConstraints more(c.p_tot() * 1.5, p);
                CHECK(test::near(solve_singular(h, more).capacity_nats, r.capacity_nats, 1e-9));
            }
        }
    }

    TEST_CASE("factor from the multiplier has rank at most nu")
    {
        const ChannelMatrix h(fixtures::h3x2());
        Rng rng(113);
        for (int k = 0; k < 10; ++k)
        {
            RVector d(3);
            for (Index i = 0; i < 3; ++i)
                d(i) = std::exp(rng.uniform(-2, 2));
            const LowRankFactor b = factor_from_dcheck(h, DiagonalMultiplier(d));
            CHECK(b.values().rows() == 3);
            CHECK(b.values().cols() == 2);
            CHECK(coupling_residual(h, DiagonalMultiplier(d), CovarianceMatrix(b.product())) < 1e-9);
        }
    }

    TEST_CASE("routing preconditions")
    {
        CHECK_THROWS_AS(solve_singular(ChannelMatrix(fixtures::h3x3()), PowerConstraints(1.0, RVector::Ones(3))),
                        RoutingError);
        Rng rng(127);
        CHECK_THROWS_AS(solve_singular(ChannelMatrix(random_rank_one_matrix(rng, 2, 3)),
                                       PowerConstraints(1.0, RVector::Ones(3))),
                        RoutingError);
    }
}
