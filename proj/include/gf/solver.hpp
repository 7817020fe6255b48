#pragma once

#include <cstdint>
#include <optional>

#include "gf/lrs.hpp"

namespace gf {

struct SolveBudget {
    std::uint64_t node_limit = 10'000'000;
    double time_limit_seconds = 600.0;

    void validate() const;
};

enum class SolveStatus { Feasible, Infeasible, BudgetExceeded };
enum class SolveMode { Generic, StructureAware };

struct SolveOutcome {
    SolveStatus status{};
    std::optional<Schedule> schedule; // present iff Feasible
    std::uint64_t nodes_explored = 0;
};

// Decides whether a schedule with every machine load strictly below the
// threshold exists. Branch and bound: jobs by fewest remaining eligible
// machines, machines in index order, capacity pruning, and a total-work
// bound. StructureAware additionally applies deduction rules for the rank-3
// gadgets (one huge per machine, huge class routing, one variable job per
// machine, at most one clause job per clause machine), each enabled only
// after its exact guard inequality holds on the actual instance.
SolveOutcome decide(const LrsInstance& inst, const Rational& threshold, const SolveBudget& budget,
                    SolveMode mode = SolveMode::Generic);

struct OptimizeOutcome {
    SolveStatus status{}; // Feasible = proven optimal
    std::optional<Schedule> schedule;
    std::optional<Rational> value;
    std::uint64_t nodes_explored = 0;
};

// Exact minimum makespan, incumbent-improving search seeded by greedy().
OptimizeOutcome optimize(const LrsInstance& inst, const SolveBudget& budget);

// Jobs in input order, each onto the machine minimizing its resulting load,
// ties to the lowest machine index.
Schedule greedy(const LrsInstance& inst);

} // namespace gf
