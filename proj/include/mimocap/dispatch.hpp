#ifndef MIMOCAP_DISPATCH_HPP
#define MIMOCAP_DISPATCH_HPP

#include <optional>
#include <string_view>

#include "mimocap/optim.hpp"
#include "mimocap/solver_unitrank.hpp"
#include "mimocap/types.hpp"

namespace mimocap
{

enum class SolveMode
{
    auto_route,
    basic,
    fullrank,
    singular,
    unitrank,
    closedform,
    waterfill
};

std::string_view to_string(SolveMode mode) noexcept;
std::optional<SolveMode> parse_mode(std::string_view name) noexcept;

/// Solver auto mode picks: unitrank for nu = 1, closedform or fullrank for
/// nu = n_T, singular otherwise.
SolverKind route(const ChannelMatrix& h, const PowerConstraints& c);

/// Variable count reported by each solver for a channel of rank nu.
int expected_n_var(SolverKind kind, int n_t, int nu);

/// Public entry point.
SolveReport solve(const ChannelMatrix& h, const PowerConstraints& c,
                  SolveMode mode = SolveMode::auto_route, const OptimSettings& s = {},
                  PhaseConvention phase = PhaseConvention::aligned);

struct CrossValidation
{
    SolveReport routed;
    SolveReport basic;
    double capacity_gap = 0.0; ///< |C_routed - C_basic| in nats
};

CrossValidation cross_validate(const ChannelMatrix& h, const PowerConstraints& c,
                               const OptimSettings& s = {},
                               PhaseConvention phase = PhaseConvention::aligned);

} // namespace mimocap

#endif
