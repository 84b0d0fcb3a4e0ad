#include <doctest.h>

#include <memory>

#include "gapforge/errors.hpp"
#include "gapforge/threshold.hpp"
#include "oracles.hpp"

using namespace gapforge;
using threshold::AVertex;
using threshold::BVertex;
using threshold::ThresholdGraph;

namespace {

std::shared_ptr<const ecc::Codebook> rs_book(std::uint64_t p, std::size_t r, std::size_t m) {
    return std::make_shared<const ecc::Codebook>(
        ecc::enumerate_codebook(ecc::CodeSpec::reed_solomon(p, r, m)));
}

ThresholdGraph graph_5_2_4_2() { return ThresholdGraph::build(rs_book(5, 2, 4), 2, Rational(1, 2)); }
ThresholdGraph graph_3_2_3_2() { return ThresholdGraph::build(rs_book(3, 2, 3), 2, Rational(1, 2)); }

} // namespace

TEST_CASE("built graph carries the construction's parameter tuple") {
    const auto g = graph_5_2_4_2();
    CHECK(g.params().part_size_a == 25);
    CHECK(g.params().parts_a == 2);
    CHECK(g.params().part_size_b == 25);
    CHECK(g.params().parts_b == 4);
    CHECK(g.params().h_squared == Rational(2, 1)); // h = sqrt(2)
    CHECK(g.params().epsilon == Rational(1, 2));
    CHECK(g.params().h_floor() == 1);
    CHECK(g.params().bad_index_threshold() == 2); // ceil(m/2)
}

TEST_CASE("h equals k^2 when delta = 1 - 1/k^4 at epsilon = 1/2") {
    // k = 2: RS(17,1,16) declares exactly 15/16 = 1 - 1/k^4.
    const auto g = ThresholdGraph::build(rs_book(17, 1, 16), 2, Rational(1, 2));
    CHECK(g.codebook().declared_min_distance == Rational(15, 16));
    CHECK(g.params().h_squared == Rational(16, 1)); // h = 4 = k^2
    CHECK(g.params().h_floor() == 4);
    CHECK_FALSE(threshold::x_size_exceeds_threshold(g, 4)); // 4*3 < 16
    CHECK(threshold::x_size_exceeds_threshold(g, 5));       // 5*4 >= 16
}

TEST_CASE("k=1 reduces adjacency to symbol equality at one coordinate") {
    const auto g = ThresholdGraph::build(rs_book(3, 1, 2), 1, Rational(1, 2));
    CHECK(g.params().part_size_b == 3); // B_j = Sigma
    for (std::uint64_t x = 0; x < 3; ++x)
        for (std::uint64_t j = 0; j < 2; ++j)
            for (std::uint64_t v = 0; v < 3; ++v)
                CHECK(g.adjacent({0, x}, {j, v}) == (g.codebook().codewords[x][j] == v));
    CHECK(threshold::check_covering_property(g).holds);
}

TEST_CASE("build refuses degenerate distance, bad epsilon, and blown budgets") {
    auto rep = std::make_shared<const ecc::Codebook>(
        ecc::make_codebook(3, {{0, 0}, {1, 1}, {2, 2}}, Rational(1, 1)));
    CHECK_THROWS_AS(ThresholdGraph::build(rep, 2, Rational(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(ThresholdGraph::build(rs_book(5, 2, 4), 2, Rational(0, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ThresholdGraph::build(rs_book(5, 2, 4), 2, Rational(1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ThresholdGraph::build(rs_book(5, 2, 4), 12, Rational(1, 2)), BudgetError);
}

TEST_CASE("common neighbors are adjacent to the whole tuple by construction") {
    const auto g = graph_5_2_4_2();
    SeededRng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<std::uint64_t> tuple{rng.below(25), rng.below(25)};
        const std::uint64_t j = rng.below(4);
        const BVertex b = g.common_neighbor(tuple, j);
        for (std::uint64_t i = 0; i < 2; ++i) CHECK(g.adjacent({i, tuple[i]}, b));
    }
    // All parts holding the same codeword x meet b = ((x)_j, ..., (x)_j).
    const BVertex b = g.common_neighbor(std::vector<std::uint64_t>{7, 7}, 2);
    const ecc::Symbol s = g.codebook().codewords[7][2];
    CHECK(g.b_symbol(b.vector_index, 0) == s);
    CHECK(g.b_symbol(b.vector_index, 1) == s);
}

TEST_CASE("the worked common-neighbor example over GF(5)") {
    const auto g = graph_5_2_4_2();
    // Messages (1,2) and (0,0) sit at lexicographic ranks 1*5+2 = 7 and 0.
    CHECK(g.codebook().codewords[7] == std::vector<ecc::Symbol>{1, 3, 0, 2});
    CHECK(g.codebook().codewords[0] == std::vector<ecc::Symbol>{0, 0, 0, 0});
    // At the second coordinate the symbols are 3 and 0, so b = (3,0).
    const BVertex b = g.common_neighbor(std::vector<std::uint64_t>{7, 0}, 1);
    CHECK(g.b_symbol(b.vector_index, 0) == 3);
    CHECK(g.b_symbol(b.vector_index, 1) == 0);
    CHECK(b.vector_index == g.pack_b_vector(std::vector<ecc::Symbol>{3, 0}));
}

TEST_CASE("adjacency rejects out-of-range vertices and a mismatch is non-adjacent") {
    const auto g = ThresholdGraph::build(rs_book(3, 1, 3), 2, Rational(1, 2));
    // Codeword 0 is all zeros; the all-ones b-vector disagrees everywhere.
    const std::uint64_t ones = g.pack_b_vector(std::vector<ecc::Symbol>{1, 1});
    CHECK_FALSE(g.adjacent({0, 0}, {0, ones}));
    CHECK_THROWS_AS(g.adjacent({2, 0}, {0, 0}), std::out_of_range);
    CHECK_THROWS_AS(g.adjacent({0, 99}, {0, 0}), std::out_of_range);
    CHECK_THROWS_AS(g.adjacent({0, 0}, {9, 0}), std::out_of_range);
}

TEST_CASE("neighbor counts match exhaustive enumeration on the p=3,r=1,k=2 graph") {
    const auto g = ThresholdGraph::build(rs_book(3, 1, 3), 2, Rational(1, 2));
    const auto& words = g.codebook().codewords;
    for (std::uint64_t j = 0; j < g.params().parts_b; ++j) {
        for (std::uint64_t v = 0; v < g.params().part_size_b; ++v) {
            std::uint64_t via_adjacency = 0;
            for (std::uint64_t i = 0; i < 2; ++i)
                for (std::uint64_t x = 0; x < words.size(); ++x)
                    via_adjacency += g.adjacent({i, x}, {j, v});
            std::uint64_t via_symbols = 0;
            for (std::uint64_t i = 0; i < 2; ++i)
                for (const auto& w : words) via_symbols += w[j] == g.b_symbol(v, i);
            CHECK(via_adjacency == via_symbols);
        }
    }
}

TEST_CASE("covering property holds on built graphs and fails after deleting the witness") {
    for (const auto& g : {graph_5_2_4_2(), graph_3_2_3_2()}) {
        const auto serial = threshold::check_covering_property_serial(g);
        const auto parallel = threshold::check_covering_property(g);
        CHECK(serial.holds);
        CHECK(parallel.holds);
        CHECK(serial.tuples_checked == parallel.tuples_checked);
    }
    const auto g = graph_3_2_3_2();
    // The common neighbor of a tuple at one coordinate is the unique witness;
    // deleting it breaks the property exactly there.
    const std::vector<std::uint64_t> tuple{2, 5};
    const BVertex doomed = g.common_neighbor(tuple, 1);
    const auto broken = g.with_b_vertex_deleted(doomed);
    const auto serial = threshold::check_covering_property_serial(broken);
    const auto parallel = threshold::check_covering_property(broken);
    REQUIRE_FALSE(serial.holds);
    REQUIRE_FALSE(parallel.holds);
    CHECK(serial.counterexample->codeword_per_part == parallel.counterexample->codeword_per_part);
    CHECK(serial.counterexample->b_part == parallel.counterexample->b_part);
    CHECK(parallel.counterexample->b_part == 1);
    // The reported tuple has no surviving common neighbor at that part.
    const BVertex reported =
        broken.common_neighbor(parallel.counterexample->codeword_per_part, 1);
    CHECK_FALSE(broken.b_vertex_present(reported));
}

TEST_CASE("covering sweep refuses past the budget") {
    CHECK_THROWS_AS(threshold::check_covering_property(graph_5_2_4_2(), {100}), BudgetError);
}

TEST_CASE("witness check: pigeonhole keeps one-tuple X harmless") {
    const auto g = graph_5_2_4_2();
    SeededRng rng(11);
    // |X| = k vertices can never give any b_j the required k+1 neighbors.
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<AVertex> x{{0, rng.below(25)}, {1, rng.below(25)}};
        std::vector<std::uint64_t> choice;
        for (std::uint64_t j = 0; j < 4; ++j) choice.push_back(rng.below(25));
        const auto report = threshold::check_threshold_witness(g, x, choice);
        CHECK(report.bad_index_count == 0);
        CHECK(report.implication_holds);
    }
    const auto empty = threshold::check_threshold_witness(g, {}, std::vector<std::uint64_t>(4, 0));
    CHECK(empty.bad_index_count == 0);
    CHECK(empty.implication_holds);
}

TEST_CASE("x-size threshold uses the exact squared form") {
    const auto g = graph_5_2_4_2(); // h^2 = 2
    CHECK_FALSE(threshold::x_size_exceeds_threshold(g, 0));
    CHECK_FALSE(threshold::x_size_exceeds_threshold(g, 1));
    CHECK(threshold::x_size_exceeds_threshold(g, 2)); // 2*1 >= 2
    const auto g2 = graph_3_2_3_2(); // h^2 = 3/2
    CHECK_FALSE(threshold::x_size_exceeds_threshold(g2, 1));
    CHECK(threshold::x_size_exceeds_threshold(g2, 2)); // 2*1 >= 3/2
}

TEST_CASE("soundness sweep is clean on the p=3,r=2,m=3,k=2 graph") {
    const auto g = graph_3_2_3_2();
    const auto serial = threshold::sweep_threshold_soundness_serial(g, 2);
    const auto parallel = threshold::sweep_threshold_soundness(g, 2);
    CHECK(serial.holds);
    CHECK(parallel.holds);
    CHECK(serial.x_subsets_checked == parallel.x_subsets_checked);
    CHECK(serial.witness_evaluations == parallel.witness_evaluations);
    CHECK_THROWS_AS(threshold::sweep_threshold_soundness(g, 3, {1000}), BudgetError);
}

TEST_CASE("soundness sweep is non-vacuous on the k=1 repetition graph") {
    // RS(7,1,6) gives h^2 = 6, so |X| = 2 still counts as within the
    // threshold and the sweep genuinely tests pairs: a bad part would need a
    // b-vertex adjacent to both picks, impossible for distinct constants.
    const auto g = ThresholdGraph::build(rs_book(7, 1, 6), 1, Rational(1, 2));
    CHECK(g.params().h_squared == Rational(6, 1));
    CHECK(g.params().h_floor() == 2);
    CHECK_FALSE(threshold::x_size_exceeds_threshold(g, 2)); // 2*1 < 6
    const auto report = threshold::sweep_threshold_soundness(
        g, static_cast<std::uint64_t>(g.params().h_floor()), {200000000});
    CHECK(report.holds);
    CHECK(report.x_subsets_checked == 1 + 7 + 21); // all X with |X| <= 2
}

TEST_CASE("soundness sweep catches violations when the declared distance lies") {
    // Words (0,0),(0,1),(0,2) really have distance 1/2; declaring 2/3 makes
    // h^2 = 3, so X of size 2 counts as within the threshold while b = (0) in
    // part 0 is adjacent to all three codewords. The sweep must find that.
    auto book = std::make_shared<const ecc::Codebook>(
        ecc::make_codebook(3, {{0, 0}, {0, 1}, {0, 2}}, Rational(2, 3)));
    const auto g = ThresholdGraph::build(book, 1, Rational(1, 2));
    CHECK(g.params().h_squared == Rational(3, 1));
    const auto serial = threshold::sweep_threshold_soundness_serial(g, 2);
    const auto parallel = threshold::sweep_threshold_soundness(g, 2);
    REQUIRE_FALSE(serial.holds);
    REQUIRE_FALSE(parallel.holds);
    CHECK(serial.violation->x == parallel.violation->x);
    CHECK(serial.violation->b_choice == parallel.violation->b_choice);
    const auto replay = threshold::check_threshold_witness(g, serial.violation->x,
                                                           serial.violation->b_choice);
    CHECK_FALSE(replay.implication_holds);
    // The dishonest declaration is also what collision_bound_check flags.
    const std::vector<AVertex> x{{0, 0}, {0, 1}};
    CHECK_FALSE(threshold::collision_bound_check(g, x).bound_respected);
}

TEST_CASE("collision bound check") {
    const auto g = graph_5_2_4_2();
    SUBCASE("same codeword across parts is flagged, not a violation") {
        const std::vector<AVertex> x{{0, 3}, {1, 3}};
        const auto report = threshold::collision_bound_check(g, x);
        CHECK(report.same_codeword_pairs == 1);
        CHECK(report.agreement_sum == 4); // full agreement over m = 4
        CHECK(report.bound_respected);
    }
    SUBCASE("distinct RS codewords agree within (1-delta)m") {
        for (std::uint64_t a = 0; a < 25; ++a) {
            for (std::uint64_t b = a + 1; b < 25; ++b) {
                const std::vector<AVertex> x{{0, a}, {0, b}};
                const auto report = threshold::collision_bound_check(g, x);
                CHECK(report.bound_respected);
                CHECK(report.max_agreement_distinct <= 2); // (1-delta)m with delta = 1/2
                CHECK(report.max_agreement_distinct <= 1); // degree bound: r-1 roots
            }
        }
    }
    SUBCASE("singleton is vacuous") {
        const std::vector<AVertex> x{{0, 3}};
        const auto report = threshold::collision_bound_check(g, x);
        CHECK(report.bound_respected);
        CHECK(report.agreement_sum == 0);
    }
    SUBCASE("empty X is rejected") {
        CHECK_THROWS_AS(threshold::collision_bound_check(g, {}), std::invalid_argument);
    }
}

TEST_CASE("bad-index counts stay below the sum of pairwise agreements") {
    // Counting identity from the soundness proof: every bad index charges
    // some agreeing pair, so bad_index_count <= sum of |L_{x,x'}|.
    const auto g = graph_3_2_3_2();
    SeededRng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<AVertex> x;
        const std::uint64_t size = 2 + rng.below(4);
        for (std::uint64_t i = 0; i < size; ++i) x.push_back({rng.below(2), rng.below(9)});
        std::vector<std::uint64_t> choice;
        for (std::uint64_t j = 0; j < 3; ++j) choice.push_back(rng.below(9));
        const auto witness = threshold::check_threshold_witness(g, x, choice);
        const auto collisions = threshold::collision_bound_check(g, x);
        CHECK(witness.bad_index_count <= collisions.agreement_sum);
    }
}
