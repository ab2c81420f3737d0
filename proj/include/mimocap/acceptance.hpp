#ifndef MIMOCAP_ACCEPTANCE_HPP
#define MIMOCAP_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mimocap/optim.hpp"
#include "mimocap/solver_unitrank.hpp"

namespace mimocap
{

struct AcceptanceOptions
{
    std::uint64_t seed = 1;
    /// Phase convention handed to the unit-rank solver.
    PhaseConvention phase = PhaseConvention::aligned;
    OptimSettings settings;
    int benchmark_trials = 10;
};

struct CriterionResult
{
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs the eleven acceptance criteria in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// One line per criterion, e.g. "PASS  1  oracle equivalence (full rank)  ...".
std::string format_result(const CriterionResult& r);

} // namespace mimocap

#endif
