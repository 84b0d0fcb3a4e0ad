#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gapforge/core.hpp"
#include "gapforge/rational.hpp"
#include "gapforge/solvers.hpp"
#include "gapforge/threshold.hpp"

namespace gapforge::reductions {

struct ComposeOptions {
    std::uint64_t max_universe = 10000000; // cap on |U'| = m*(|U|*t)^c
    bool emit_labels = false;              // human-readable tuple side-table
};

// The 2-weighted product instance together with the layout needed to map set
// ids back to threshold-graph vertices. A-side sets carry weight m/k, B-side
// sets weight 1. Element indices are mixed-radix over (i, u-tuple, b-tuple).
struct ComposedInstance {
    core::SetCoverInstance instance;
    std::uint64_t n = 0, k = 0, t = 0, m = 0, c = 0;
    std::uint64_t universe_in = 0; // |U| of the input instance
    std::uint64_t source_sets = 0; // |S| of the input instance

    std::uint64_t a_set_id(std::uint64_t part, std::uint64_t codeword) const {
        return part * n + codeword;
    }
    std::uint64_t b_set_id(std::uint64_t part, std::uint64_t vector_index) const {
        return n * k + part * t + vector_index;
    }
    std::uint64_t element_index(std::uint64_t b_part, std::span<const std::uint64_t> u_tuple,
                                std::span<const std::uint64_t> b_tuple) const;
};

// Product composition of an unweighted instance with a threshold graph:
// S' = A u B, U' = U^c x B_i^c x [m]. The A-side covers a tuple through a
// coordinate j where it is threshold-adjacent to b_j and covers u_j; the
// B-side vertex b covers the tuples of its own part that avoid b. Codeword
// indices beyond |S| act as dummy sets that cover nothing.
ComposedInstance compose(const core::SetCoverInstance& gamma,
                         const threshold::ThresholdGraph& graph, std::uint64_t c,
                         const ComposeOptions& options = {});

// The constructive completeness witness: one A-vertex per part from a k-cover
// of gamma (repeating sets if the cover is smaller than k) plus the canonical
// common neighbor in every B-part. Weight is exactly 2m.
core::Solution assemble_completeness_witness(const ComposedInstance& composed,
                                             const threshold::ThresholdGraph& graph,
                                             const core::SetCoverInstance& gamma,
                                             std::span<const std::uint64_t> cover_set_ids);

struct BlockDiagnosticRow {
    std::uint64_t b_part = 0;
    std::uint64_t picked_in_part = 0;
    bool many_b_picks = false;    // >= c+1 distinct picks in B_i
    bool heavy_neighbor = false;  // some picked b in B_i has >= k+1 picked A-neighbors
};

// Per-part dichotomy from the soundness argument, evaluated on a candidate
// solution. For a covering solution of a composition whose source has
// OPT > k, every row satisfies one horn.
std::vector<BlockDiagnosticRow> soundness_block_diagnostic(
    const ComposedInstance& composed, const threshold::ThresholdGraph& graph,
    const core::Solution& solution);

// Two-weight removal via slot replication: universe becomes U x [w]; a
// weight-1 set covers all slots of its elements, a weight-w set splits into w
// copies, one per slot. The unweighted optimum equals the weighted optimum.
// Unweighted input passes through unchanged.
core::SetCoverInstance remove_weights(const core::SetCoverInstance& gamma);

// Clique -> SetCover with |U| = O(k^3 log n): one mandatory block element per
// slot pair plus bitwise equality gadgets; OPT <= C(k,2) iff a k-clique exists.
core::SetCoverInstance clique_to_setcover_small_universe(const core::SimpleGraph& graph,
                                                         std::uint64_t k);

struct CliqueReduction {
    core::SimpleGraph graph;
    std::uint64_t k = 0;
    std::uint64_t k_prime = 0;   // k + groups
    std::uint64_t groups = 0;    // h
    std::uint64_t group_size = 0;
    std::uint64_t set_count = 0;
    std::uint64_t w_part_size = 0; // k^group_size

    std::uint64_t v_vertex(std::uint64_t part, std::uint64_t set_index) const {
        return part * set_count + set_index;
    }
    std::uint64_t w_vertex(std::uint64_t group, std::uint64_t tuple_index) const {
        return k * set_count + group * w_part_size + tuple_index;
    }
};

// SetCover -> Clique: V_1..V_k copies of S, one
// W-part per element group; a V-W edge exists iff every group coordinate the
// W-tuple assigns to that V-part is coverable by the chosen set.
CliqueReduction setcover_to_clique(const core::SetCoverInstance& gamma, std::uint64_t k);

struct GapThresholds {
    std::int64_t completeness_weight = 0; // 2m
    Rational soundness_b{0, 1};           // (1-eps)*m*c
    std::int64_t soundness_floor = 0;     // floor(min{m*h/k, (1-eps)*m*c})
};

GapThresholds gap_thresholds(const threshold::ThresholdParams& params, std::uint64_t c);

struct GapCertificate {
    bool provenance_ok = false;
    std::string original_hash;
    std::string reduced_hash;

    std::string original_opt_status; // "optimal" | "bound_certified" | "unverified" | "infeasible"
    std::int64_t original_opt = -1;

    std::int64_t completeness_weight = 0;
    std::int64_t soundness_floor = 0;

    bool completeness_applicable = false;
    bool completeness_pass = false;
    std::int64_t witness_weight = -1;

    bool soundness_applicable = false;
    bool soundness_pass = false;
    std::string soundness_status; // "certified" | "unverified"

    bool pass = false;
    std::int64_t wall_ms = 0;
};

// Binds the two gap bullets to solver oracles: reruns the reduction to check
// provenance, solves the original exactly, then either replays the
// constructive witness (completeness) or exhausts all covers up to the
// soundness floor (soundness).
GapCertificate certify_gap(const core::SetCoverInstance& gamma, const ComposedInstance& reduced,
                           const threshold::ThresholdGraph& graph, std::uint64_t c,
                           std::uint64_t k, const solvers::SolverBudget& budget = {});

} // namespace gapforge::reductions
