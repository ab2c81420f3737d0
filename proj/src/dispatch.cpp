#include "mimocap/dispatch.hpp"

#include <cmath>

#include "mimocap/errors.hpp"
#include "mimocap/solver_basic.hpp"
#include "mimocap/solver_fullrank.hpp"
#include "mimocap/solver_singular.hpp"
#include "mimocap/waterfill.hpp"

namespace mimocap
{

std::string_view to_string(SolveMode mode) noexcept
{
    switch (mode)
    {
        case SolveMode::auto_route:
            return "auto";
        case SolveMode::basic:
            return "basic";
        case SolveMode::fullrank:
            return "fullrank";
        case SolveMode::singular:
            return "singular";
        case SolveMode::unitrank:
            return "unitrank";
        case SolveMode::closedform:
            return "closedform";
        case SolveMode::waterfill:
            return "waterfill";
    }
    return "unknown";
}

std::optional<SolveMode> parse_mode(std::string_view name) noexcept
{
    for (SolveMode m : {SolveMode::auto_route, SolveMode::basic, SolveMode::fullrank,
                        SolveMode::singular, SolveMode::unitrank, SolveMode::closedform,
                        SolveMode::waterfill})
    {
        if (to_string(m) == name)
        {
            return m;
        }
    }
    return std::nullopt;
}

SolverKind route(const ChannelMatrix& h, const PowerConstraints& c)
{
    if (h.rank() == 1)
    {
        return SolverKind::unitrank;
    }
    if (h.full_rank())
    {
        return closed_form_conditions(h, c).holds ? SolverKind::closedform
                                                  : SolverKind::fullrank;
    }
    return SolverKind::singular;
}

int expected_n_var(SolverKind kind, int n_t, int nu)
{
    switch (kind)
    {
        case SolverKind::basic:
            return n_t * n_t;
        case SolverKind::fullrank:
        case SolverKind::closedform:
            return n_var_for(n_t, n_t);
        case SolverKind::singular:
            return n_var_for(n_t, nu);
        case SolverKind::unitrank:
            return n_var_for(n_t, 1);
        case SolverKind::waterfill:
            return nu;
    }
    return 0;
}

namespace
{

SolverKind forced_kind(const ChannelMatrix& h, const PowerConstraints& c, SolveMode mode)
{
    const std::string where = "solver '" + std::string(to_string(mode)) + "': ";
    switch (mode)
    {
        case SolveMode::auto_route:
            return route(h, c);
        case SolveMode::basic:
            return SolverKind::basic;
        case SolveMode::waterfill:
            return SolverKind::waterfill;
        case SolveMode::unitrank:
            if (h.rank() != 1)
            {
                throw RoutingError(where + "requires rank(H) = 1, got " + std::to_string(h.rank()));
            }
            return SolverKind::unitrank;
        case SolveMode::fullrank:
            if (!h.full_rank())
            {
                throw RoutingError(where + "requires rank(H) = n_T");
            }
            return SolverKind::fullrank;
        case SolveMode::closedform:
            if (!h.full_rank())
            {
                throw RoutingError(where + "requires rank(H) = n_T");
            }
            if (!closed_form_conditions(h, c).holds)
            {
                throw RoutingError(where + "closed-form conditions do not hold");
            }
            return SolverKind::closedform;
        case SolveMode::singular:
            if (h.rank() <= 1 || h.full_rank())
            {
                throw RoutingError(where + "requires 1 < rank(H) < n_T");
            }
            return SolverKind::singular;
    }
    throw RoutingError("unknown solve mode");
}

} // namespace

SolveReport solve(const ChannelMatrix& h, const PowerConstraints& c, SolveMode mode,
                  const OptimSettings& s, PhaseConvention phase)
{
    if (c.size() != h.n_t())
    {
        throw InputError("per-antenna bound count (" + std::to_string(c.size()) +
                         ") does not match n_T (" + std::to_string(h.n_t()) + ")");
    }
    switch (forced_kind(h, c, mode))
    {
        case SolverKind::basic:
            return solve_basic(h, c, s);
        case SolverKind::fullrank:
            return solve_fullrank(h, c, s);
        case SolverKind::closedform:
            return solve_closed_form(h, c);
        case SolverKind::singular:
            return solve_singular(h, c, s);
        case SolverKind::unitrank:
            return solve_unitrank(h, c, phase);
        case SolverKind::waterfill:
            return waterfill_tp(h, c.p_tot());
    }
    throw RoutingError("unknown solver");
}

CrossValidation cross_validate(const ChannelMatrix& h, const PowerConstraints& c,
                               const OptimSettings& s, PhaseConvention phase)
{
    CrossValidation out{solve(h, c, SolveMode::auto_route, s, phase), solve_basic(h, c, s), 0.0};
    out.capacity_gap = std::abs(out.routed.capacity_nats - out.basic.capacity_nats);
    return out;
}

} // namespace mimocap
