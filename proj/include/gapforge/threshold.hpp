#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "gapforge/ecc.hpp"
#include "gapforge/rational.hpp"

namespace gapforge::threshold {

struct ThresholdParams {
    std::uint64_t part_size_a = 0; // n : size of each A_i
    std::uint64_t parts_a = 0;     // k : number of A-parts
    std::uint64_t part_size_b = 0; // t : size of each B_j = |Sigma|^k
    std::uint64_t parts_b = 0;     // m : number of B-parts
    Rational h_squared{0, 1};      // h = sqrt(2*eps/(1-delta)), kept squared and exact
    Rational epsilon{1, 2};

    double h_approx() const;
    std::int64_t h_floor() const { return floor_sqrt(h_squared); }
    // "at least eps*m indices" is fixed to the integer threshold ceil(eps*m).
    std::int64_t bad_index_threshold() const;
};

struct AVertex {
    std::uint64_t part;     // i in [0,k)
    std::uint64_t codeword; // index into the codebook, in [0,n)
    friend bool operator==(const AVertex&, const AVertex&) = default;
    friend auto operator<=>(const AVertex&, const AVertex&) = default;
};

struct BVertex {
    std::uint64_t part;         // j in [0,m)
    std::uint64_t vector_index; // encodes a vector in Sigma^k, in [0,t)
    friend bool operator==(const BVertex&, const BVertex&) = default;
    friend auto operator<=>(const BVertex&, const BVertex&) = default;
};

struct BuildBudget {
    std::uint64_t max_b_part_size = 1000000; // cap on t = |Sigma|^k
};

struct SweepBudget {
    std::uint64_t max_checks = 100000000; // cap on enumerated combinations
};

// The code-built bipartite gadget: A-side vertices are codewords (one copy
// per part), B-side vertices are vectors in Sigma^k, addressed by index and
// never materialized. Adjacency is computed from the stored vectors.
// Immutable after build; the deleted-vertex mask exists for fault-injection
// in tests.
class ThresholdGraph {
  public:
    static ThresholdGraph build(std::shared_ptr<const ecc::Codebook> book, std::uint64_t k,
                                Rational epsilon, const BuildBudget& budget = {});

    const ThresholdParams& params() const { return params_; }
    const ecc::Codebook& codebook() const { return *book_; }
    std::shared_ptr<const ecc::Codebook> codebook_ptr() const { return book_; }
    std::uint64_t alphabet() const { return alphabet_; }

    // Symbol of the B-side vector at coordinate a_part.
    ecc::Symbol b_symbol(std::uint64_t vector_index, std::uint64_t a_part) const;
    std::uint64_t pack_b_vector(std::span<const ecc::Symbol> symbols) const;

    bool adjacent(const AVertex& a, const BVertex& b) const;

    // The canonical common neighbor ((a_1)_j, ..., (a_k)_j) in B_j.
    BVertex common_neighbor(std::span<const std::uint64_t> codeword_per_part,
                            std::uint64_t b_part) const;

    bool b_vertex_present(const BVertex& b) const;
    ThresholdGraph with_b_vertex_deleted(const BVertex& b) const;

  private:
    ThresholdParams params_;
    std::shared_ptr<const ecc::Codebook> book_;
    std::uint64_t alphabet_ = 0;
    std::vector<std::uint64_t> alphabet_pow_; // alphabet^j, j = 0..k
    std::set<std::pair<std::uint64_t, std::uint64_t>> deleted_b_;
};

struct CoveringCounterexample {
    std::vector<std::uint64_t> codeword_per_part;
    std::uint64_t b_part = 0;
};

struct CoveringReport {
    bool holds = false;
    std::uint64_t tuples_checked = 0;
    std::optional<CoveringCounterexample> counterexample;
};

// Exhaustive check of the covering property: every one-per-part A-tuple has a
// common neighbor in every B_j. Parallel kernel plus serial reference; both
// report the counterexample with the smallest flattened index, so results are
// schedule-independent.
CoveringReport check_covering_property(const ThresholdGraph& graph, const SweepBudget& budget = {});
CoveringReport check_covering_property_serial(const ThresholdGraph& graph,
                                              const SweepBudget& budget = {});

struct WitnessReport {
    std::uint64_t bad_index_count = 0; // parts j with |N(b_j) cap X| >= k+1
    bool x_exceeds_threshold = false;  // |X| > h under the squared-form convention
    bool implication_holds = true;     // fails only when bad >= ceil(eps*m) and |X| <= h
};

// |X| > h is decided exactly in the squared form: (1-delta)*|X|*(|X|-1) >= 2*eps.
bool x_size_exceeds_threshold(const ThresholdGraph& graph, std::uint64_t x_size);

WitnessReport check_threshold_witness(const ThresholdGraph& graph, std::span<const AVertex> x,
                                      std::span<const std::uint64_t> b_choice);

struct SoundnessViolation {
    std::vector<AVertex> x;
    std::vector<std::uint64_t> b_choice;
};

struct SoundnessSweepReport {
    bool holds = false;
    std::uint64_t x_subsets_checked = 0;
    std::uint64_t witness_evaluations = 0;
    std::optional<SoundnessViolation> violation;
};

// Exhaustive sweep over every X with |X| <= max_x_size and every one-per-part
// b-choice; reports the first violation in deterministic order.
SoundnessSweepReport sweep_threshold_soundness(const ThresholdGraph& graph,
                                               std::uint64_t max_x_size,
                                               const SweepBudget& budget = {});
SoundnessSweepReport sweep_threshold_soundness_serial(const ThresholdGraph& graph,
                                                      std::uint64_t max_x_size,
                                                      const SweepBudget& budget = {});

struct CollisionReport {
    bool bound_respected = true;           // distinct-codeword agreements <= (1-delta)*m
    std::uint64_t same_codeword_pairs = 0; // cross-part copies of one codeword (agree everywhere)
    std::uint64_t agreement_sum = 0;       // sum of |L_{x,x'}| over all distinct-vertex pairs
    std::uint64_t max_agreement_distinct = 0;
};

CollisionReport collision_bound_check(const ThresholdGraph& graph, std::span<const AVertex> x);

} // namespace gapforge::threshold
