#include <doctest.h>

#include "mimocap/errors.hpp"
#include "mimocap/linalg.hpp"
#include "mimocap/random.hpp"
#include "mimocap/solver_basic.hpp"
#include "mimocap/solver_singular.hpp"
#include "mimocap/solver_unitrank.hpp"
#include "support.hpp"

using namespace mimocap;

namespace
{

double fill(const CVector& v, const RVector& p, double alpha)
{
    double s = 0.0;
    for (Index i = 0; i < v.size(); ++i)
        s += std::min(alpha * std::norm(v(i)), p(i));
    return s;
}

/// Root of sum_i min(alpha |v_i|^2, P_i) = p_tot by bisection.
double alpha_by_bisection(const CVector& v, const RVector& p, double p_tot)
{
    double hi = 1.0;
    while (fill(v, p, hi) < p_tot)
        hi *= 2.0;
    return test::bisect([&](double a) { return fill(v, p, a) - p_tot; }, 0.0, hi);
}

CVector random_unit(Rng& rng, Index n)
{
    CVector v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = Complex(rng.normal(), rng.normal());
    return v.normalized();
}

RVector random_caps(Rng& rng, Index n)
{
    RVector p(n);
    for (Index i = 0; i < n; ++i)
        p(i) = rng.uniform(0.05, 1.5);
    return p;
}

} // namespace

TEST_SUITE("solver_unitrank")
{
    TEST_CASE("alpha examples")
    {
        CVector v(2);
        v << std::sqrt(0.8), std::sqrt(0.2);
        RVector p = RVector::Constant(2, 0.5);
        CHECK(test::near(calculate_alpha(v, p, 1.0), 2.5, 1e-12));
        CHECK(test::near(alpha_by_bisection(v, p, 1.0), 2.5, 1e-9));

        CVector w = CVector::Constant(2, 1.0 / std::sqrt(2.0));
        CHECK(test::near(calculate_alpha(w, RVector::Ones(2), 1.0), 1.0, 1e-12));
        CHECK(test::near(alpha_by_bisection(w, RVector::Ones(2), 1.0), 1.0, 1e-9));

        RVector q(2);
        q << 0.3, 0.9;
        const double a = calculate_alpha(v, q, q.sum());
        CHECK(test::near(fill(v, q, a), q.sum(), 1e-12));
        CHECK(test::near(a, std::max(0.3 / 0.8, 0.9 / 0.2), 1e-12));
    }

    TEST_CASE("alpha agrees with bisection on random data")
    {
        Rng rng(131);
        for (int k = 0; k < 50; ++k)
        {
            const Index n   = 2 + k % 5;
            const CVector v = random_unit(rng, n);
            const RVector p = random_caps(rng, n);
            const double pt = rng.uniform(0.05, 1.0) * p.sum();
            const double a  = calculate_alpha(v, p, pt);
            CHECK(test::near(a, alpha_by_bisection(v, p, pt), 1e-9 * std::max(1.0, a)));
            CHECK(fill(v, p, a / 2) <= pt + 1e-12);
            CHECK(fill(v, p, 2 * a) >= pt - 1e-12);
            CHECK(fill(v, p, 0.0) == 0.0);
        }
    }

    TEST_CASE("alpha with a zero entry of v")
    {
        CVector v(2);
        v << 1.0, 0.0;
        RVector p(2);
        p << 0.5, 1.0;
        CHECK(test::near(calculate_alpha(v, p, 0.4), 0.4, 1e-15));
        CHECK(std::isinf(calculate_alpha(v, p, 1.0)));

        CVector w(3);
        w << 0.0, std::sqrt(0.5), std::sqrt(0.5);
        RVector r = RVector::Ones(3);
        CHECK(test::near(calculate_alpha(w, r, 1.0), 1.0, 1e-12));
    }

    TEST_CASE("alpha errors")
    {
        CVector v = CVector::Ones(2);
        CHECK_THROWS_AS(calculate_alpha(v, RVector::Ones(2), 1.0), InputError);
        CVector u = CVector::Constant(2, 1.0 / std::sqrt(2.0));
        CHECK_THROWS_AS(calculate_alpha(u, RVector::Ones(3), 1.0), InputError);
        CHECK_THROWS_AS(calculate_alpha(u, RVector::Ones(2), 3.0, false), InfeasibleError);
        CHECK(test::near(calculate_alpha(u, RVector::Ones(2), 3.0, true), 2.0, 1e-12));
    }

    TEST_CASE("worked example")
    {
        CMatrix h(1, 2);
        h << std::sqrt(0.8), std::sqrt(0.2);
        const ChannelMatrix ch(h);
        const PowerConstraints c(1.0, RVector::Constant(2, 0.5));
        const SolveReport r = solve_unitrank(ch, c);
        CHECK(test::near(r.capacity_nats, std::log(1.9), 1e-12));
        CHECK(test::max_abs_diff(r.q_opt.entries(), CMatrix::Constant(2, 2, 0.5)) < 1e-12);
        CHECK(test::near(r.capacity_nats, solve_basic(ch, c).capacity_nats, 1e-8));
        CHECK(r.solver == SolverKind::unitrank);
        CHECK(r.n_var == n_var_for(2, 1));
        CHECK(r.tp_active);
    }

    TEST_CASE("MISO channels against the oracle")
    {
        Rng rng(137);
        for (int k = 0; k < 50; ++k)
        {
            const Index n = 2 + k % 4;
            const CMatrix h = random_gaussian_matrix(rng, 1, n);
            const RVector p = random_caps(rng, n);
            const PowerConstraints c(rng.uniform(0.1, 1.0) * p.sum(), p);
            const ChannelMatrix ch(h);
            CHECK(test::near(solve_unitrank(ch, c).capacity_nats, solve_basic(ch, c).capacity_nats, 1e-8));
        }
    }

    TEST_CASE("covariance matches the phase-aligned rank-one construction")
    {
        Rng rng(139);
        for (int k = 0; k < 30; ++k)
        {
            const Index n   = 2 + k % 5;
            const CVector u = random_unit(rng, 1 + k % 3);
            const CVector v = random_unit(rng, n);
            const double g  = rng.uniform(0.5, 2.0);
            const CMatrix h = test::unit_vector_outer(u, v, g);
            const RVector p = random_caps(rng, n);
            const double pt = rng.uniform(0.1, 1.0) * p.sum();
            const ChannelMatrix ch(h);
            const SolveReport r = solve_unitrank(ch, PowerConstraints(pt, p));

            const double a = alpha_by_bisection(v, p, pt);
            CVector q(n);
            for (Index i = 0; i < n; ++i)
                q(i) = std::sqrt(std::min(a * std::norm(v(i)), p(i))) * std::polar(1.0, std::arg(v(i)));
            CHECK(test::max_abs_diff(r.q_opt.entries(), q * q.adjoint()) < 1e-9);

            CHECK(test::near(r.q_opt.trace(), pt, 1e-9));
            CHECK((r.q_opt.diagonal() - p).maxCoeff() <= 1e-12);
            CHECK(r.q_opt.rank() == 1);
            CHECK(test::near(r.capacity_nats, std::log(1.0 + g * g * std::norm(v.dot(q))), 1e-12));
            CHECK(test::near(r.capacity_nats, test::logdet_lu(h, r.q_opt.entries()), 1e-9));
            CHECK(test::near(r.capacity_nats, mutual_information(ch, r.q_opt), kAtol));
        }
    }

    TEST_CASE("global phase invariance")
    {
        Rng rng(149);
        for (int k = 0; k < 10; ++k)
        {
            const CVector u = random_unit(rng, 2);
            const CVector v = random_unit(rng, 3);
            const RVector p = random_caps(rng, 3);
            const PowerConstraints c(0.5 * p.sum(), p);
            const Complex phase = std::polar(1.0, rng.uniform(0, 2 * test::kPi));
            const SolveReport a = solve_unitrank(ChannelMatrix(test::unit_vector_outer(u, v, 1.3)), c);
            const SolveReport b = solve_unitrank(ChannelMatrix(test::unit_vector_outer(u, phase * v, 1.3)), c);
            CHECK(test::near(a.capacity_nats, b.capacity_nats, 1e-12));
            CHECK((a.q_opt.diagonal() - b.q_opt.diagonal()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }

    TEST_CASE("conjugate phase loses capacity on complex channels")
    {
        Rng rng(151);
        const CVector v = random_unit(rng, 3);
        const CMatrix h = test::unit_vector_outer(CVector::Ones(1), v, 1.0);
        const PowerConstraints c(1.0, RVector::Constant(3, 0.6));
        const ChannelMatrix ch(h);
        const double aligned = solve_unitrank(ch, c).capacity_nats;
        const double conj    = solve_unitrank(ch, c, PhaseConvention::conjugate).capacity_nats;
        CHECK(conj < aligned - 1e-3);
        CHECK(test::near(aligned, solve_basic(ch, c).capacity_nats, 1e-8));
    }

    TEST_CASE("routing precondition")
    {
        CHECK_THROWS_AS(solve_unitrank(ChannelMatrix(CMatrix::Identity(2, 2)), PowerConstraints(1.0, RVector::Ones(2))),
                        RoutingError);
    }
}
