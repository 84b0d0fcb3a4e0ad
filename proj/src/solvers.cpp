#include "gapforge/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "gapforge/errors.hpp"

namespace gapforge::solvers {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
    std::uint64_t max_nodes;
    Clock::time_point end;
    bool timed;
    std::uint64_t nodes = 0;

    explicit Deadline(const SolverBudget& b)
        : max_nodes(b.max_nodes),
          end(Clock::now() + std::chrono::milliseconds(b.wall_time_ms)),
          timed(b.wall_time_ms > 0) {}

    // Returns false once the budget is spent; time is polled sparsely.
    bool tick() {
        ++nodes;
        if (nodes > max_nodes) return false;
        if (timed && (nodes & 1023) == 0 && Clock::now() > end) return false;
        return true;
    }
};

// Element -> indices of sets containing it.
std::vector<std::vector<std::size_t>> build_incidence(const core::SetCoverInstance& inst) {
    std::vector<std::vector<std::size_t>> inc(inst.universe_size());
    const auto sets = inst.sets();
    for (std::size_t s = 0; s < sets.size(); ++s)
        for (std::uint64_t e : sets[s].elements) inc[e].push_back(s);
    return inc;
}

std::vector<std::uint64_t> uncoverable(const std::vector<std::vector<std::size_t>>& inc) {
    std::vector<std::uint64_t> bad;
    for (std::uint64_t e = 0; e < inc.size(); ++e)
        if (inc[e].empty()) bad.push_back(e);
    return bad;
}

struct CoverSearch {
    const core::SetCoverInstance& inst;
    const std::vector<std::vector<std::size_t>>& inc;
    Deadline& deadline;
    std::vector<std::uint64_t> cover_count; // per element, how many chosen sets cover it
    std::uint64_t covered_total = 0;
    std::vector<std::size_t> chosen;
    bool aborted = false;

    // Best complete solution found (OPT mode) or the cap (decision mode).
    std::int64_t best_weight;
    bool track_best;
    std::vector<std::size_t> best_chosen;
    bool found_any = false;

    CoverSearch(const core::SetCoverInstance& i, const std::vector<std::vector<std::size_t>>& ic,
                Deadline& d, std::int64_t bound, bool track)
        : inst(i), inc(ic), deadline(d), cover_count(i.universe_size(), 0),
          best_weight(bound), track_best(track) {}

    void apply(std::size_t s, std::int64_t dir) {
        for (std::uint64_t e : inst.sets()[s].elements) {
            if (dir > 0) {
                if (cover_count[e]++ == 0) ++covered_total;
            } else {
                if (--cover_count[e] == 0) --covered_total;
            }
        }
    }

    std::int64_t lowest_uncovered() const {
        for (std::uint64_t e = 0; e < inst.universe_size(); ++e)
            if (cover_count[e] == 0) return static_cast<std::int64_t>(e);
        return -1;
    }

    // Explores all covers of weight below best_weight (OPT mode) or at most
    // best_weight (decision mode, strict = false).
    void dfs(std::int64_t weight, bool strict) {
        if (!deadline.tick()) {
            aborted = true;
            return;
        }
        const std::int64_t e = lowest_uncovered();
        if (e < 0) {
            found_any = true;
            if (track_best) {
                best_weight = weight;
                best_chosen = chosen;
            }
            return;
        }
        for (std::size_t s : inc[static_cast<std::uint64_t>(e)]) {
            const std::int64_t w = inst.sets()[s].weight;
            const std::int64_t next = weight + w;
            if (strict ? next >= best_weight : next > best_weight) continue;
            chosen.push_back(s);
            apply(s, +1);
            dfs(next, strict);
            if (aborted) return;
            // Decision mode stops at the first cover; `chosen` is the witness.
            if (!track_best && found_any) return;
            apply(s, -1);
            chosen.pop_back();
        }
    }
};

core::Solution solution_from_indices(const core::SetCoverInstance& inst,
                                     const std::vector<std::size_t>& indices) {
    std::vector<std::uint64_t> ids;
    ids.reserve(indices.size());
    for (std::size_t s : indices) ids.push_back(inst.sets()[s].id);
    return core::make_solution(inst, std::move(ids));
}

} // namespace

CoverDecision decide_cover_within(const core::SetCoverInstance& instance, std::int64_t max_weight,
                                  const SolverBudget& budget) {
    CoverDecision out;
    const auto inc = build_incidence(instance);
    if (!uncoverable(inc).empty()) {
        out.status = DecisionStatus::no_cover;
        return out;
    }
    if (max_weight < 0) {
        out.status = instance.universe_size() == 0 ? DecisionStatus::cover_found
                                                   : DecisionStatus::no_cover;
        return out;
    }
    Deadline deadline(budget);
    CoverSearch search(instance, inc, deadline, max_weight, false);
    search.dfs(0, false);
    out.nodes_explored = deadline.nodes;
    if (search.found_any) {
        out.status = DecisionStatus::cover_found;
        out.witness = solution_from_indices(instance, search.chosen);
        return out;
    }
    out.status = search.aborted ? DecisionStatus::budget_exceeded : DecisionStatus::no_cover;
    return out;
}

ExactResult exact_weighted_opt(const core::SetCoverInstance& instance, const SolverBudget& budget) {
    ExactResult out;
    const auto inc = build_incidence(instance);
    out.uncoverable_elements = uncoverable(inc);
    if (!out.uncoverable_elements.empty()) {
        out.status = SolveStatus::infeasible;
        return out;
    }
    if (instance.universe_size() == 0) {
        out.status = SolveStatus::optimal;
        out.opt_weight = 0;
        return out;
    }

    const core::Solution ub = greedy(instance);
    Deadline deadline(budget);
    CoverSearch search(instance, inc, deadline, ub.total_weight + 1, true);
    search.dfs(0, true);
    out.nodes_explored = deadline.nodes;
    if (!search.aborted) {
        out.status = SolveStatus::optimal;
        if (search.found_any) {
            out.opt_weight = search.best_weight;
            out.witness = solution_from_indices(instance, search.best_chosen);
        } else {
            // Nothing beat the greedy cover, so it is optimal.
            out.opt_weight = ub.total_weight;
            out.witness = ub;
        }
        return out;
    }

    // Budget ran out mid-search: certify "no cover of weight <= W" bottom-up
    // with whatever budget remains.
    out.status = SolveStatus::unknown;
    out.certified_no_cover_leq = -1;
    const auto start = Clock::now();
    for (std::int64_t w = 0; w < ub.total_weight; ++w) {
        SolverBudget rest = budget;
        if (budget.wall_time_ms > 0) {
            const auto spent =
                std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
            if (spent >= budget.wall_time_ms) break;
            rest.wall_time_ms = budget.wall_time_ms - spent;
        }
        const CoverDecision d = decide_cover_within(instance, w, rest);
        out.nodes_explored += d.nodes_explored;
        if (d.status == DecisionStatus::no_cover) {
            out.status = SolveStatus::bound_certified;
            out.certified_no_cover_leq = w;
            continue;
        }
        if (d.status == DecisionStatus::cover_found) {
            // First weight at which a cover exists: that is the optimum.
            out.status = SolveStatus::optimal;
            out.opt_weight = d.witness.total_weight;
            out.witness = d.witness;
            return out;
        }
        break; // budget exhausted again
    }
    if (out.certified_no_cover_leq == ub.total_weight - 1) {
        // Everything below the greedy cover is ruled out, so greedy is optimal.
        out.status = SolveStatus::optimal;
        out.opt_weight = ub.total_weight;
        out.witness = ub;
    }
    return out;
}

core::Solution greedy(const core::SetCoverInstance& instance) {
    const auto inc = build_incidence(instance);
    const auto bad = uncoverable(inc);
    if (!bad.empty())
        throw std::invalid_argument("element " + std::to_string(bad.front()) +
                                    " is in no set; instance has no cover");
    const auto sets = instance.sets();
    std::vector<bool> covered(instance.universe_size(), false);
    std::vector<bool> chosen(sets.size(), false);
    std::uint64_t remaining = instance.universe_size();
    std::vector<std::uint64_t> ids;
    while (remaining > 0) {
        std::size_t best = sets.size();
        std::uint64_t best_new = 0;
        for (std::size_t s = 0; s < sets.size(); ++s) {
            if (chosen[s]) continue;
            std::uint64_t fresh = 0;
            for (std::uint64_t e : sets[s].elements) fresh += !covered[e];
            if (fresh == 0) continue;
            if (best == sets.size()) {
                best = s;
                best_new = fresh;
                continue;
            }
            // fresh/weight > best_new/best_weight, ties by lower id.
            const __int128 lhs = static_cast<__int128>(fresh) * sets[best].weight;
            const __int128 rhs = static_cast<__int128>(best_new) * sets[s].weight;
            if (lhs > rhs || (lhs == rhs && sets[s].id < sets[best].id)) {
                best = s;
                best_new = fresh;
            }
        }
        chosen[best] = true;
        ids.push_back(sets[best].id);
        for (std::uint64_t e : sets[best].elements) {
            if (!covered[e]) {
                covered[e] = true;
                --remaining;
            }
        }
    }
    return core::make_solution(instance, std::move(ids));
}

namespace {

// Smallest r >= 1 with (k/T)^r >= |U|, i.e. ceil(log2|U| / (log2 k - log2 T)),
// computed exactly on integers.
std::uint64_t block_greedy_rounds(std::uint64_t universe, std::uint64_t k, std::uint64_t t) {
    if (universe <= 1) return 1;
    unsigned __int128 knum = 1, tnum = 1;
    for (std::uint64_t r = 1; r <= 200; ++r) {
        knum *= k;
        tnum *= t;
        if (knum >= tnum * universe) return r;
    }
    throw std::invalid_argument("block greedy round count out of range");
}

} // namespace

BlockGreedyResult block_greedy(const core::SetCoverInstance& instance, std::uint64_t k,
                               std::uint64_t t) {
    if (!(2 <= t && t < k)) throw std::invalid_argument("require 2 <= T < k");
    if (!core::is_unweighted(instance))
        throw std::invalid_argument("block greedy requires an unweighted instance");

    const auto sets = instance.sets();
    const std::uint64_t pick = k - t;
    BlockGreedyResult result;
    result.pick_size = pick;
    result.rounds_planned = instance.universe_size() == 0
                                ? 0
                                : block_greedy_rounds(instance.universe_size(), k, t);

    std::vector<bool> covered(instance.universe_size(), false);
    std::uint64_t remaining = instance.universe_size();
    std::vector<std::uint64_t> chosen_ids;
    std::vector<bool> in_solution(sets.size(), false);

    for (std::uint64_t round = 0; round < result.rounds_planned && remaining > 0; ++round) {
        // Exhaustive best (k-T)-subset by newly covered count; the first
        // combination in lexicographic order wins ties.
        const std::uint64_t comb = std::min<std::uint64_t>(pick, sets.size());
        std::vector<std::size_t> idx(comb);
        for (std::size_t i = 0; i < comb; ++i) idx[i] = i;
        std::vector<std::size_t> best_idx;
        std::uint64_t best_new = 0;
        std::vector<bool> mark(instance.universe_size(), false);
        while (true) {
            std::uint64_t fresh = 0;
            std::vector<std::uint64_t> touched;
            for (std::size_t s : idx) {
                for (std::uint64_t e : sets[s].elements) {
                    if (!covered[e] && !mark[e]) {
                        mark[e] = true;
                        touched.push_back(e);
                        ++fresh;
                    }
                }
            }
            for (std::uint64_t e : touched) mark[e] = false;
            if (fresh > best_new || best_idx.empty()) {
                best_new = fresh;
                best_idx = idx;
            }
            std::int64_t i = static_cast<std::int64_t>(comb) - 1;
            while (i >= 0 && idx[i] == sets.size() - comb + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (std::size_t j = i + 1; j < comb; ++j) idx[j] = idx[j - 1] + 1;
        }

        BlockGreedyRound trace;
        for (std::size_t s : best_idx) {
            trace.chosen_ids.push_back(sets[s].id);
            if (!in_solution[s]) {
                in_solution[s] = true;
                chosen_ids.push_back(sets[s].id);
            }
            for (std::uint64_t e : sets[s].elements) {
                if (!covered[e]) {
                    covered[e] = true;
                    --remaining;
                }
            }
        }
        trace.uncovered_after = remaining;
        result.rounds.push_back(std::move(trace));
    }

    result.covered = remaining == 0;
    result.solution = core::make_solution(instance, std::move(chosen_ids));
    return result;
}

namespace {

struct CliqueSearch {
    std::uint64_t n;
    std::size_t words;
    std::vector<std::uint64_t> adj; // n rows of `words` words
    std::uint64_t k;
    Deadline& deadline;
    std::vector<std::uint64_t> current;
    std::vector<std::uint64_t> witness;

    CliqueSearch(const core::SimpleGraph& g, std::uint64_t k_, Deadline& d)
        : n(g.vertex_count()), words((n + 63) / 64), adj(n * words, 0), k(k_), deadline(d) {
        for (const auto& [u, v] : g.edges()) {
            adj[u * words + (v >> 6)] |= 1ULL << (v & 63);
            adj[v * words + (u >> 6)] |= 1ULL << (u & 63);
        }
    }

    bool expand(std::vector<std::uint64_t>& cand, std::uint64_t cand_count) {
        if (!deadline.tick()) throw BudgetError("clique search budget exhausted");
        if (current.size() == k) {
            witness = current;
            return true;
        }
        if (current.size() + cand_count < k) return false;

        // Pivot: candidate with the most candidate neighbors; only vertices
        // outside its neighborhood (including the pivot itself) start branches.
        std::uint64_t pivot = n;
        std::uint64_t pivot_deg = 0;
        for (std::uint64_t v = 0; v < n; ++v) {
            if (!(cand[v >> 6] >> (v & 63) & 1)) continue;
            std::uint64_t deg = 0;
            for (std::size_t w = 0; w < words; ++w)
                deg += static_cast<std::uint64_t>(__builtin_popcountll(cand[w] & adj[v * words + w]));
            if (pivot == n || deg > pivot_deg) {
                pivot = v;
                pivot_deg = deg;
            }
        }
        for (std::uint64_t v = 0; v < n; ++v) {
            if (!(cand[v >> 6] >> (v & 63) & 1)) continue;
            if (v != pivot && (adj[pivot * words + (v >> 6)] >> (v & 63) & 1)) continue;
            std::vector<std::uint64_t> next(words);
            std::uint64_t next_count = 0;
            for (std::size_t w = 0; w < words; ++w) {
                next[w] = cand[w] & adj[v * words + w];
                next_count += static_cast<std::uint64_t>(__builtin_popcountll(next[w]));
            }
            current.push_back(v);
            if (expand(next, next_count)) return true;
            current.pop_back();
            cand[v >> 6] &= ~(1ULL << (v & 63));
            --cand_count;
            if (current.size() + cand_count < k) return false;
        }
        return false;
    }
};

} // namespace

CliqueResult exact_clique(const core::SimpleGraph& graph, std::uint64_t k,
                          const SolverBudget& budget) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    CliqueResult out;
    if (k > graph.vertex_count()) return out;
    Deadline deadline(budget);
    CliqueSearch search(graph, k, deadline);
    std::vector<std::uint64_t> cand(search.words, 0);
    for (std::uint64_t v = 0; v < graph.vertex_count(); ++v) cand[v >> 6] |= 1ULL << (v & 63);
    out.found = search.expand(cand, graph.vertex_count());
    out.nodes_explored = deadline.nodes;
    if (out.found) out.witness = search.witness;
    return out;
}

} // namespace gapforge::solvers
