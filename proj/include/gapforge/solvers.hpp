#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "gapforge/core.hpp"

namespace gapforge::solvers {

struct SolverBudget {
    std::uint64_t max_nodes = 50000000;
    std::int64_t wall_time_ms = 0; // 0 = unlimited

    SolverBudget() = default;
    SolverBudget(std::uint64_t nodes, std::int64_t ms) : max_nodes(nodes), wall_time_ms(ms) {}
};

enum class SolveStatus { optimal, infeasible, bound_certified, unknown };

struct ExactResult {
    SolveStatus status = SolveStatus::unknown;
    std::int64_t opt_weight = -1;               // valid when optimal
    core::Solution witness;                     // valid when optimal
    std::int64_t certified_no_cover_leq = -1;   // valid when bound_certified; -1 = empty certificate
    std::vector<std::uint64_t> uncoverable_elements; // valid when infeasible
    std::uint64_t nodes_explored = 0;
};

// Exact minimum-weight cover by branch and bound: branch on the lowest-index
// uncovered element over the sets containing it, prune by the best weight so
// far. If the budget runs out before the search tree is exhausted, falls back
// to certifying "no cover of weight <= W" for increasing W and reports the
// largest fully certified bound.
ExactResult exact_weighted_opt(const core::SetCoverInstance& instance,
                               const SolverBudget& budget = {});

enum class DecisionStatus { cover_found, no_cover, budget_exceeded };

struct CoverDecision {
    DecisionStatus status = DecisionStatus::budget_exceeded;
    core::Solution witness; // valid when cover_found
    std::uint64_t nodes_explored = 0;
};

// Complete search for a cover of total weight <= max_weight.
CoverDecision decide_cover_within(const core::SetCoverInstance& instance, std::int64_t max_weight,
                                  const SolverBudget& budget = {});

// Classic greedy: picks the set maximizing newly-covered elements per unit
// weight, ties broken by lowest set id. Throws if some element is uncoverable.
core::Solution greedy(const core::SetCoverInstance& instance);

struct BlockGreedyRound {
    std::vector<std::uint64_t> chosen_ids;
    std::uint64_t uncovered_after = 0;
};

struct BlockGreedyResult {
    bool covered = false;
    core::Solution solution;
    std::uint64_t rounds_planned = 0; // r = ceil(log2 |U| / (log2 k - log2 T))
    std::uint64_t pick_size = 0;      // k - T
    std::vector<BlockGreedyRound> rounds;
};

// The modified greedy: for r rounds, exhaustively selects the (k-T)-subset of
// sets covering the most still-uncovered elements. Requires 2 <= T < k and an
// unweighted instance; completes whenever a k-cover exists, otherwise returns
// the partial cover with covered = false.
BlockGreedyResult block_greedy(const core::SetCoverInstance& instance, std::uint64_t k,
                               std::uint64_t t);

struct CliqueResult {
    bool found = false;
    std::vector<std::uint64_t> witness;
    std::uint64_t nodes_explored = 0;
};

// Backtracking k-clique search over bitset adjacency with pivot pruning.
CliqueResult exact_clique(const core::SimpleGraph& graph, std::uint64_t k,
                          const SolverBudget& budget = {});

} // namespace gapforge::solvers
