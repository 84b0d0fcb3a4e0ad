#include "gapforge/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gapforge/errors.hpp"

namespace gapforge::threshold {

double ThresholdParams::h_approx() const { return std::sqrt(h_squared.to_double()); }

std::int64_t ThresholdParams::bad_index_threshold() const {
    return (epsilon * Rational(static_cast<std::int64_t>(parts_b), 1)).ceil();
}

ThresholdGraph ThresholdGraph::build(std::shared_ptr<const ecc::Codebook> book, std::uint64_t k,
                                     Rational epsilon, const BuildBudget& budget) {
    if (!book) throw std::invalid_argument("null codebook");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (epsilon <= Rational(0, 1) || epsilon >= Rational(1, 1))
        throw std::invalid_argument("epsilon must lie in (0,1)");
    const Rational delta = book->declared_min_distance;
    if (delta == Rational(1, 1))
        throw std::invalid_argument("degenerate distance delta = 1: h = sqrt(2eps/(1-delta)) undefined");

    ThresholdGraph g;
    g.book_ = std::move(book);
    g.alphabet_ = g.book_->alphabet_size;
    unsigned __int128 t = 1;
    g.alphabet_pow_.assign(k + 1, 1);
    for (std::uint64_t i = 1; i <= k; ++i) {
        t *= g.alphabet_;
        if (t > budget.max_b_part_size)
            throw BudgetError("B-part size |Sigma|^k exceeds budget of " +
                              std::to_string(budget.max_b_part_size));
        g.alphabet_pow_[i] = static_cast<std::uint64_t>(t);
    }
    g.params_.part_size_a = g.book_->codewords.size();
    g.params_.parts_a = k;
    g.params_.part_size_b = static_cast<std::uint64_t>(t);
    g.params_.parts_b = g.book_->block_length;
    g.params_.epsilon = epsilon;
    g.params_.h_squared = Rational(2, 1) * epsilon / (Rational(1, 1) - delta);
    return g;
}

ecc::Symbol ThresholdGraph::b_symbol(std::uint64_t vector_index, std::uint64_t a_part) const {
    // First coordinate most significant.
    const std::uint64_t k = params_.parts_a;
    return vector_index / alphabet_pow_[k - 1 - a_part] % alphabet_;
}

std::uint64_t ThresholdGraph::pack_b_vector(std::span<const ecc::Symbol> symbols) const {
    if (symbols.size() != params_.parts_a) throw std::invalid_argument("need one symbol per A-part");
    std::uint64_t v = 0;
    for (ecc::Symbol s : symbols) {
        if (s >= alphabet_) throw std::invalid_argument("symbol out of alphabet");
        v = v * alphabet_ + s;
    }
    return v;
}

bool ThresholdGraph::adjacent(const AVertex& a, const BVertex& b) const {
    if (a.part >= params_.parts_a || a.codeword >= params_.part_size_a)
        throw std::out_of_range("A-vertex out of range");
    if (b.part >= params_.parts_b || b.vector_index >= params_.part_size_b)
        throw std::out_of_range("B-vertex out of range");
    return book_->codewords[a.codeword][b.part] == b_symbol(b.vector_index, a.part);
}

BVertex ThresholdGraph::common_neighbor(std::span<const std::uint64_t> codeword_per_part,
                                        std::uint64_t b_part) const {
    if (codeword_per_part.size() != params_.parts_a)
        throw std::invalid_argument("need one codeword per A-part");
    if (b_part >= params_.parts_b) throw std::out_of_range("B-part out of range");
    std::uint64_t v = 0;
    for (std::uint64_t cw : codeword_per_part) {
        if (cw >= params_.part_size_a) throw std::out_of_range("codeword index out of range");
        v = v * alphabet_ + book_->codewords[cw][b_part];
    }
    return BVertex{b_part, v};
}

bool ThresholdGraph::b_vertex_present(const BVertex& b) const {
    return !deleted_b_.contains({b.part, b.vector_index});
}

ThresholdGraph ThresholdGraph::with_b_vertex_deleted(const BVertex& b) const {
    if (b.part >= params_.parts_b || b.vector_index >= params_.part_size_b)
        throw std::out_of_range("B-vertex out of range");
    ThresholdGraph g = *this;
    g.deleted_b_.insert({b.part, b.vector_index});
    return g;
}

namespace {

// n^k with budget guard; throws BudgetError when tuples*m would exceed the sweep budget.
std::uint64_t tuple_space(const ThresholdGraph& g, const SweepBudget& budget) {
    unsigned __int128 tuples = 1;
    for (std::uint64_t i = 0; i < g.params().parts_a; ++i) {
        tuples *= g.params().part_size_a;
        if (tuples * g.params().parts_b > budget.max_checks)
            throw BudgetError("covering sweep n^k*m exceeds budget of " +
                              std::to_string(budget.max_checks));
    }
    return static_cast<std::uint64_t>(tuples);
}

void decode_tuple(const ThresholdGraph& g, std::uint64_t flat, std::vector<std::uint64_t>& tuple) {
    const std::uint64_t n = g.params().part_size_a;
    for (std::size_t i = tuple.size(); i-- > 0;) {
        tuple[i] = flat % n;
        flat /= n;
    }
}

// True iff the tuple has a common neighbor in B_j, honoring deletions.
bool tuple_covered_at(const ThresholdGraph& g, const std::vector<std::uint64_t>& tuple,
                      std::uint64_t j) {
    const BVertex cand = g.common_neighbor(tuple, j);
    if (g.b_vertex_present(cand)) {
        for (std::uint64_t i = 0; i < g.params().parts_a; ++i)
            if (!g.adjacent(AVertex{i, tuple[i]}, cand)) return false;
        return true;
    }
    // Candidate deleted: scan the whole part for any surviving common neighbor.
    for (std::uint64_t v = 0; v < g.params().part_size_b; ++v) {
        const BVertex b{j, v};
        if (!g.b_vertex_present(b)) continue;
        bool all = true;
        for (std::uint64_t i = 0; i < g.params().parts_a && all; ++i)
            all = g.adjacent(AVertex{i, tuple[i]}, b);
        if (all) return true;
    }
    return false;
}

CoveringReport covering_report_from(const ThresholdGraph& g, std::uint64_t tuples,
                                    std::uint64_t first_violation) {
    CoveringReport report;
    report.tuples_checked = tuples;
    if (first_violation == std::numeric_limits<std::uint64_t>::max()) {
        report.holds = true;
        return report;
    }
    report.holds = false;
    CoveringCounterexample ce;
    ce.b_part = first_violation % g.params().parts_b;
    ce.codeword_per_part.assign(g.params().parts_a, 0);
    decode_tuple(g, first_violation / g.params().parts_b, ce.codeword_per_part);
    report.counterexample = ce;
    return report;
}

} // namespace

CoveringReport check_covering_property_serial(const ThresholdGraph& graph,
                                              const SweepBudget& budget) {
    const std::uint64_t tuples = tuple_space(graph, budget);
    const std::uint64_t m = graph.params().parts_b;
    std::vector<std::uint64_t> tuple(graph.params().parts_a, 0);
    std::uint64_t first_violation = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t f = 0; f < tuples && first_violation == std::numeric_limits<std::uint64_t>::max(); ++f) {
        decode_tuple(graph, f, tuple);
        for (std::uint64_t j = 0; j < m; ++j) {
            if (!tuple_covered_at(graph, tuple, j)) {
                first_violation = f * m + j;
                break;
            }
        }
    }
    return covering_report_from(graph, tuples, first_violation);
}

CoveringReport check_covering_property(const ThresholdGraph& graph, const SweepBudget& budget) {
    const std::uint64_t tuples = tuple_space(graph, budget);
    const std::uint64_t m = graph.params().parts_b;
    std::uint64_t first_violation = std::numeric_limits<std::uint64_t>::max();
#pragma omp parallel
    {
        std::vector<std::uint64_t> tuple(graph.params().parts_a, 0);
        std::uint64_t local = std::numeric_limits<std::uint64_t>::max();
#pragma omp for schedule(static) nowait
        for (long long f = 0; f < static_cast<long long>(tuples); ++f) {
            decode_tuple(graph, static_cast<std::uint64_t>(f), tuple);
            for (std::uint64_t j = 0; j < m; ++j) {
                if (!tuple_covered_at(graph, tuple, j)) {
                    local = std::min(local, static_cast<std::uint64_t>(f) * m + j);
                    break;
                }
            }
        }
#pragma omp critical
        first_violation = std::min(first_violation, local);
    }
    return covering_report_from(graph, tuples, first_violation);
}

bool x_size_exceeds_threshold(const ThresholdGraph& graph, std::uint64_t x_size) {
    // |X| > h  decided as  (1-delta)*|X|*(|X|-1) >= 2*eps, all exact.
    if (x_size < 2) return false;
    const Rational pairs2(static_cast<std::int64_t>(x_size * (x_size - 1)), 1);
    return pairs2 >= graph.params().h_squared;
}

WitnessReport check_threshold_witness(const ThresholdGraph& graph, std::span<const AVertex> x,
                                      std::span<const std::uint64_t> b_choice) {
    const auto& p = graph.params();
    if (b_choice.size() != p.parts_b) throw std::invalid_argument("need one b-vertex per B-part");
    // X is a vertex set: collapse exact duplicates.
    std::vector<AVertex> xs(x.begin(), x.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    WitnessReport report;
    for (std::uint64_t j = 0; j < p.parts_b; ++j) {
        const BVertex b{j, b_choice[j]};
        std::uint64_t neighbors = 0;
        for (const AVertex& a : xs) neighbors += graph.adjacent(a, b);
        if (neighbors >= p.parts_a + 1) ++report.bad_index_count;
    }
    report.x_exceeds_threshold = x_size_exceeds_threshold(graph, xs.size());
    report.implication_holds =
        !(static_cast<std::int64_t>(report.bad_index_count) >= p.bad_index_threshold() &&
          !report.x_exceeds_threshold);
    return report;
}

namespace {

struct SubsetEnumerator {
    std::uint64_t universe;
    std::uint64_t max_size;
    // Yields subsets ordered by (size, lexicographic combination).
    template <typename Fn>
    void for_each(Fn&& fn) const {
        std::vector<std::uint64_t> pick;
        if (!fn(pick)) return;
        for (std::uint64_t s = 1; s <= max_size && s <= universe; ++s) {
            pick.assign(s, 0);
            for (std::uint64_t i = 0; i < s; ++i) pick[i] = i;
            while (true) {
                if (!fn(pick)) return;
                // next combination
                std::int64_t i = static_cast<std::int64_t>(s) - 1;
                while (i >= 0 && pick[i] == universe - s + i) --i;
                if (i < 0) break;
                ++pick[i];
                for (std::uint64_t j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
            }
        }
    }
};

unsigned __int128 count_subsets_upto(std::uint64_t n, std::uint64_t s) {
    unsigned __int128 total = 0;
    for (std::uint64_t i = 0; i <= s && i <= n; ++i) {
        unsigned __int128 c = 1;
        for (std::uint64_t j = 0; j < i; ++j) c = c * (n - j) / (j + 1);
        total += c;
        if (total > std::numeric_limits<std::uint64_t>::max() / 2) break;
    }
    return total;
}

std::vector<AVertex> flat_to_x(const ThresholdGraph& g, const std::vector<std::uint64_t>& pick) {
    const std::uint64_t n = g.params().part_size_a;
    std::vector<AVertex> xs;
    xs.reserve(pick.size());
    for (std::uint64_t f : pick) xs.push_back(AVertex{f / n, f % n});
    return xs;
}

void decode_b_choice(const ThresholdGraph& g, std::uint64_t flat, std::vector<std::uint64_t>& out) {
    const std::uint64_t t = g.params().part_size_b;
    for (std::size_t j = out.size(); j-- > 0;) {
        out[j] = flat % t;
        flat /= t;
    }
}

unsigned __int128 b_choice_space(const ThresholdGraph& g) {
    // Clamped well above any budget so the product below cannot wrap.
    const unsigned __int128 cap = static_cast<unsigned __int128>(1) << 100;
    unsigned __int128 v = 1;
    for (std::uint64_t j = 0; j < g.params().parts_b; ++j) {
        v *= g.params().part_size_b;
        if (v > cap) return cap;
    }
    return v;
}

} // namespace

SoundnessSweepReport sweep_threshold_soundness_serial(const ThresholdGraph& graph,
                                                      std::uint64_t max_x_size,
                                                      const SweepBudget& budget) {
    const auto& p = graph.params();
    const std::uint64_t a_total = p.parts_a * p.part_size_a;
    const unsigned __int128 choices = b_choice_space(graph);
    const unsigned __int128 subsets = count_subsets_upto(a_total, max_x_size);
    if (subsets * choices > budget.max_checks)
        throw BudgetError("soundness sweep exceeds budget of " + std::to_string(budget.max_checks));

    SoundnessSweepReport report;
    report.holds = true;
    std::vector<std::uint64_t> choice(p.parts_b, 0);
    SubsetEnumerator en{a_total, max_x_size};
    en.for_each([&](const std::vector<std::uint64_t>& pick) {
        const std::vector<AVertex> xs = flat_to_x(graph, pick);
        ++report.x_subsets_checked;
        for (std::uint64_t f = 0; f < static_cast<std::uint64_t>(choices); ++f) {
            decode_b_choice(graph, f, choice);
            ++report.witness_evaluations;
            const WitnessReport w = check_threshold_witness(graph, xs, choice);
            if (!w.implication_holds) {
                report.holds = false;
                report.violation = SoundnessViolation{xs, choice};
                return false;
            }
        }
        return true;
    });
    return report;
}

SoundnessSweepReport sweep_threshold_soundness(const ThresholdGraph& graph,
                                               std::uint64_t max_x_size,
                                               const SweepBudget& budget) {
    const auto& p = graph.params();
    const std::uint64_t a_total = p.parts_a * p.part_size_a;
    const unsigned __int128 choices_wide = b_choice_space(graph);
    const unsigned __int128 subsets = count_subsets_upto(a_total, max_x_size);
    if (subsets * choices_wide > budget.max_checks)
        throw BudgetError("soundness sweep exceeds budget of " + std::to_string(budget.max_checks));
    const auto choices = static_cast<std::uint64_t>(choices_wide);

    SoundnessSweepReport report;
    report.holds = true;
    SubsetEnumerator en{a_total, max_x_size};
    en.for_each([&](const std::vector<std::uint64_t>& pick) {
        const std::vector<AVertex> xs = flat_to_x(graph, pick);
        ++report.x_subsets_checked;
        report.witness_evaluations += choices;
        if (x_size_exceeds_threshold(graph, xs.size())) return true; // implication vacuous
        // Per-part neighbor counts depend only on (j, v); tabulate once per X.
        std::vector<std::uint8_t> bad(p.parts_b * p.part_size_b, 0);
        for (std::uint64_t j = 0; j < p.parts_b; ++j) {
            for (std::uint64_t v = 0; v < p.part_size_b; ++v) {
                std::uint64_t neighbors = 0;
                for (const AVertex& a : xs) neighbors += graph.adjacent(a, BVertex{j, v});
                bad[j * p.part_size_b + v] = neighbors >= p.parts_a + 1;
            }
        }
        const std::int64_t threshold = p.bad_index_threshold();
        std::uint64_t first_violation = std::numeric_limits<std::uint64_t>::max();
#pragma omp parallel
        {
            std::vector<std::uint64_t> choice(p.parts_b, 0);
            std::uint64_t local = std::numeric_limits<std::uint64_t>::max();
#pragma omp for schedule(static) nowait
            for (long long f = 0; f < static_cast<long long>(choices); ++f) {
                decode_b_choice(graph, static_cast<std::uint64_t>(f), choice);
                std::int64_t bad_count = 0;
                for (std::uint64_t j = 0; j < p.parts_b; ++j)
                    bad_count += bad[j * p.part_size_b + choice[j]];
                if (bad_count >= threshold)
                    local = std::min(local, static_cast<std::uint64_t>(f));
            }
#pragma omp critical
            first_violation = std::min(first_violation, local);
        }
        if (first_violation != std::numeric_limits<std::uint64_t>::max()) {
            std::vector<std::uint64_t> choice(p.parts_b, 0);
            decode_b_choice(graph, first_violation, choice);
            report.holds = false;
            report.violation = SoundnessViolation{xs, choice};
            return false;
        }
        return true;
    });
    return report;
}

CollisionReport collision_bound_check(const ThresholdGraph& graph, std::span<const AVertex> x) {
    if (x.empty()) throw std::invalid_argument("X must be nonempty");
    std::vector<AVertex> xs(x.begin(), x.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    const auto& book = graph.codebook();
    const std::uint64_t m = graph.params().parts_b;
    const Rational delta = book.declared_min_distance;
    // agreement <= (1-delta)*m  <=>  agreement*den <= (den-num)*m
    CollisionReport report;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            if (xs[i].codeword == xs[j].codeword) {
                ++report.same_codeword_pairs;
                report.agreement_sum += m;
                continue;
            }
            const auto& a = book.codewords[xs[i].codeword];
            const auto& b = book.codewords[xs[j].codeword];
            std::uint64_t agree = 0;
            for (std::uint64_t pos = 0; pos < m; ++pos) agree += a[pos] == b[pos];
            report.agreement_sum += agree;
            report.max_agreement_distinct = std::max(report.max_agreement_distinct, agree);
            if (static_cast<__int128>(agree) * delta.den >
                static_cast<__int128>(delta.den - delta.num) * m)
                report.bound_respected = false;
        }
    }
    return report;
}

} // namespace gapforge::threshold
