#include "gapforge/reductions.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

#include "gapforge/errors.hpp"

namespace gapforge::reductions {

namespace {

std::uint64_t pow_u64(std::uint64_t base, std::uint64_t exp) {
    unsigned __int128 v = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        v *= base;
        if (v > std::numeric_limits<std::uint64_t>::max())
            throw std::overflow_error("power overflows 64 bits");
    }
    return static_cast<std::uint64_t>(v);
}

} // namespace

std::uint64_t ComposedInstance::element_index(std::uint64_t b_part,
                                              std::span<const std::uint64_t> u_tuple,
                                              std::span<const std::uint64_t> b_tuple) const {
    if (u_tuple.size() != c || b_tuple.size() != c)
        throw std::invalid_argument("tuple arity must equal c");
    std::uint64_t idx = b_part;
    for (std::uint64_t u : u_tuple) idx = idx * universe_in + u;
    for (std::uint64_t b : b_tuple) idx = idx * t + b;
    return idx;
}

ComposedInstance compose(const core::SetCoverInstance& gamma,
                         const threshold::ThresholdGraph& graph, std::uint64_t c,
                         const ComposeOptions& options) {
    if (!core::is_unweighted(gamma))
        throw std::invalid_argument("compose requires an unweighted input instance");
    if (c < 1) throw std::invalid_argument("c must be >= 1");
    const auto& p = graph.params();
    const std::uint64_t n = p.part_size_a;
    const std::uint64_t k = p.parts_a;
    const std::uint64_t t = p.part_size_b;
    const std::uint64_t m = p.parts_b;
    const std::uint64_t s_count = gamma.sets().size();
    const std::uint64_t u_count = gamma.universe_size();
    if (n < s_count)
        throw std::invalid_argument("A-part size " + std::to_string(n) +
                                    " is smaller than |S| = " + std::to_string(s_count));
    if (m % k != 0)
        throw std::invalid_argument("k must divide m so the A-side weight m/k is integral");

    unsigned __int128 universe_wide = m;
    for (std::uint64_t j = 0; j < c; ++j) universe_wide *= u_count * static_cast<unsigned __int128>(t);
    if (universe_wide > options.max_universe)
        throw BudgetError("|U'| = m*(|U|*t)^c exceeds budget of " +
                          std::to_string(options.max_universe));
    const auto universe_out = static_cast<std::uint64_t>(universe_wide);
    const std::uint64_t u_pow = u_count == 0 ? 0 : pow_u64(u_count, c);
    const std::uint64_t t_pow = pow_u64(t, c);
    const std::int64_t heavy = static_cast<std::int64_t>(m / k);

    // Membership of original elements per codeword index (dummies past |S|).
    std::vector<std::vector<bool>> covers(s_count, std::vector<bool>(u_count, false));
    for (std::uint64_t x = 0; x < s_count; ++x)
        for (std::uint64_t e : gamma.sets()[x].elements) covers[x][e] = true;

    const std::uint64_t total_sets = n * k + t * m;
    std::vector<core::SetEntry> sets(total_sets);

#pragma omp parallel for schedule(dynamic, 8)
    for (long long raw = 0; raw < static_cast<long long>(total_sets); ++raw) {
        const auto sid = static_cast<std::uint64_t>(raw);
        core::SetEntry entry;
        entry.id = sid;
        if (sid < n * k) {
            // A-side vertex (part, codeword).
            entry.weight = heavy;
            const std::uint64_t part = sid / n;
            const std::uint64_t cw = sid % n;
            if (cw < s_count && u_count > 0) {
                const auto& word = graph.codebook().codewords[cw];
                std::vector<std::uint64_t> u_tuple(c, 0);
                std::vector<bool> covers_j(c, false);
                for (std::uint64_t i = 0; i < m; ++i) {
                    const ecc::Symbol sym = word[i];
                    std::fill(u_tuple.begin(), u_tuple.end(), 0);
                    for (std::uint64_t urank = 0; urank < u_pow; ++urank) {
                        bool any = false;
                        for (std::uint64_t j = 0; j < c; ++j) {
                            covers_j[j] = covers[cw][u_tuple[j]];
                            any = any || covers_j[j];
                        }
                        if (any) {
                            const std::uint64_t base = (i * u_pow + urank) * t_pow;
                            std::vector<std::uint64_t> b_tuple(c, 0);
                            for (std::uint64_t brank = 0; brank < t_pow; ++brank) {
                                bool hit = false;
                                for (std::uint64_t j = 0; j < c && !hit; ++j)
                                    hit = covers_j[j] &&
                                          graph.b_symbol(b_tuple[j], part) == sym;
                                if (hit) entry.elements.push_back(base + brank);
                                for (std::uint64_t j = c; j-- > 0;) {
                                    if (++b_tuple[j] < t) break;
                                    b_tuple[j] = 0;
                                }
                            }
                        }
                        for (std::uint64_t j = c; j-- > 0;) {
                            if (++u_tuple[j] < u_count) break;
                            u_tuple[j] = 0;
                        }
                    }
                }
            }
        } else {
            // B-side vertex (part, vector_index) covers its part's tuples that avoid it.
            entry.weight = 1;
            const std::uint64_t part = (sid - n * k) / t;
            const std::uint64_t vec = (sid - n * k) % t;
            std::vector<std::uint64_t> b_tuple(c, 0);
            for (std::uint64_t urank = 0; urank < u_pow; ++urank) {
                const std::uint64_t base = (part * u_pow + urank) * t_pow;
                std::fill(b_tuple.begin(), b_tuple.end(), 0);
                for (std::uint64_t brank = 0; brank < t_pow; ++brank) {
                    bool avoids = true;
                    for (std::uint64_t j = 0; j < c && avoids; ++j) avoids = b_tuple[j] != vec;
                    if (avoids) entry.elements.push_back(base + brank);
                    for (std::uint64_t j = c; j-- > 0;) {
                        if (++b_tuple[j] < t) break;
                        b_tuple[j] = 0;
                    }
                }
            }
        }
        sets[sid] = std::move(entry);
    }

    ComposedInstance out{
        core::SetCoverInstance(universe_out, std::move(sets),
                               static_cast<std::int64_t>(2 * m)),
        n, k, t, m, c, u_count, s_count};

    if (options.emit_labels) {
        std::map<std::uint64_t, std::string> set_labels;
        for (std::uint64_t part = 0; part < k; ++part)
            for (std::uint64_t cw = 0; cw < n; ++cw)
                set_labels[out.a_set_id(part, cw)] =
                    "A(i=" + std::to_string(part) + ",x=" + std::to_string(cw) +
                    (cw < s_count ? ")->s" + std::to_string(gamma.sets()[cw].id) : ")->dummy");
        for (std::uint64_t part = 0; part < m; ++part)
            for (std::uint64_t vec = 0; vec < t; ++vec)
                set_labels[out.b_set_id(part, vec)] =
                    "B(j=" + std::to_string(part) + ",v=" + std::to_string(vec) + ")";
        std::map<std::uint64_t, std::string> element_labels;
        for (std::uint64_t idx = 0; idx < universe_out; ++idx) {
            std::uint64_t rest = idx;
            std::string bs, us;
            for (std::uint64_t j = 0; j < c; ++j) {
                bs = std::to_string(rest % t) + (j ? "," : "") + bs;
                rest /= t;
            }
            for (std::uint64_t j = 0; j < c; ++j) {
                us = std::to_string(rest % u_count) + (j ? "," : "") + us;
                rest /= u_count;
            }
            element_labels[idx] = "(i=" + std::to_string(rest) + "|u=" + us + "|b=" + bs + ")";
        }
        out.instance.attach_labels(std::move(set_labels), std::move(element_labels));
    }
    return out;
}

core::Solution assemble_completeness_witness(const ComposedInstance& composed,
                                             const threshold::ThresholdGraph& graph,
                                             const core::SetCoverInstance& gamma,
                                             std::span<const std::uint64_t> cover_set_ids) {
    if (cover_set_ids.empty() || cover_set_ids.size() > composed.k)
        throw std::invalid_argument("need a cover of at most k sets");
    const core::Solution cover =
        core::make_solution(gamma, {cover_set_ids.begin(), cover_set_ids.end()});
    if (!core::verify_cover(gamma, cover).covered)
        throw std::invalid_argument("the given sets do not cover the input instance");

    std::vector<std::uint64_t> codeword_per_part(composed.k);
    std::vector<std::uint64_t> ids;
    for (std::uint64_t part = 0; part < composed.k; ++part) {
        const std::uint64_t id = cover_set_ids[part % cover_set_ids.size()];
        const auto idx = gamma.index_of(id);
        codeword_per_part[part] = *idx; // s(x) is the position bijection
        ids.push_back(composed.a_set_id(part, *idx));
    }
    for (std::uint64_t j = 0; j < composed.m; ++j) {
        const threshold::BVertex b = graph.common_neighbor(codeword_per_part, j);
        ids.push_back(composed.b_set_id(j, b.vector_index));
    }
    return core::make_solution(composed.instance, std::move(ids));
}

std::vector<BlockDiagnosticRow> soundness_block_diagnostic(
    const ComposedInstance& composed, const threshold::ThresholdGraph& graph,
    const core::Solution& solution) {
    std::vector<threshold::AVertex> a_picks;
    std::vector<std::vector<std::uint64_t>> b_picks(composed.m);
    for (std::uint64_t id : solution.chosen_set_ids) {
        if (id < composed.n * composed.k) {
            a_picks.push_back({id / composed.n, id % composed.n});
        } else {
            const std::uint64_t rest = id - composed.n * composed.k;
            b_picks[rest / composed.t].push_back(rest % composed.t);
        }
    }
    std::vector<BlockDiagnosticRow> rows(composed.m);
    for (std::uint64_t i = 0; i < composed.m; ++i) {
        rows[i].b_part = i;
        rows[i].picked_in_part = b_picks[i].size();
        rows[i].many_b_picks = b_picks[i].size() >= composed.c + 1;
        for (std::uint64_t vec : b_picks[i]) {
            std::uint64_t neighbors = 0;
            for (const auto& a : a_picks)
                neighbors += graph.adjacent(a, threshold::BVertex{i, vec});
            if (neighbors >= composed.k + 1) {
                rows[i].heavy_neighbor = true;
                break;
            }
        }
    }
    return rows;
}

core::SetCoverInstance remove_weights(const core::SetCoverInstance& gamma) {
    if (core::is_unweighted(gamma)) return gamma; // w = 1 passthrough

    std::vector<std::int64_t> weights;
    for (const auto& s : gamma.sets()) weights.push_back(s.weight);
    std::sort(weights.begin(), weights.end());
    weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
    if (weights.size() > 2)
        throw std::invalid_argument("weight removal handles at most two distinct weights, got " +
                                    std::to_string(weights.size()));
    // Heavy-only instances (one distinct weight >= 2) are fine; with two
    // distinct weights the lighter one must be the unit.
    if (weights.size() == 2 && weights.front() != 1)
        throw std::invalid_argument("the lighter weight must be 1, got " +
                                    std::to_string(weights.front()));
    const std::int64_t omega = weights.back();
    const auto slots = static_cast<std::uint64_t>(omega);

    const std::uint64_t universe_out = gamma.universe_size() * slots;
    std::vector<core::SetEntry> sets;
    std::map<std::uint64_t, std::string> labels;
    std::uint64_t next_id = 0;
    for (const auto& s : gamma.sets()) {
        if (s.weight == 1) {
            core::SetEntry entry{next_id, 1, {}};
            entry.elements.reserve(s.elements.size() * slots);
            for (std::uint64_t e : s.elements)
                for (std::uint64_t slot = 0; slot < slots; ++slot)
                    entry.elements.push_back(e * slots + slot);
            labels[next_id] = "s" + std::to_string(s.id);
            sets.push_back(std::move(entry));
            ++next_id;
        } else {
            for (std::uint64_t slot = 0; slot < slots; ++slot) {
                core::SetEntry entry{next_id, 1, {}};
                entry.elements.reserve(s.elements.size());
                for (std::uint64_t e : s.elements) entry.elements.push_back(e * slots + slot);
                labels[next_id] = "s" + std::to_string(s.id) + "#" + std::to_string(slot);
                sets.push_back(std::move(entry));
                ++next_id;
            }
        }
    }
    core::SetCoverInstance out(universe_out, std::move(sets), gamma.parameter_k());
    out.attach_labels(std::move(labels), {});
    return out;
}

core::SetCoverInstance clique_to_setcover_small_universe(const core::SimpleGraph& graph,
                                                         std::uint64_t k) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    const std::uint64_t n = graph.vertex_count();
    if (n < 2) throw std::invalid_argument("graph needs at least 2 vertices");
    std::uint64_t bits = 1;
    while ((1ULL << bits) < n) ++bits; // ceil(log2 n)

    // Slot pairs (i < j), then ordered gadget triples (slot, pair, pair').
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    for (std::uint64_t i = 0; i < k; ++i)
        for (std::uint64_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
    const std::uint64_t pair_count = pairs.size();

    struct Gadget {
        std::uint64_t slot, left_pair, right_pair;
    };
    std::vector<Gadget> gadgets;
    for (std::uint64_t s = 0; s < k; ++s)
        for (std::uint64_t pa = 0; pa < pair_count; ++pa) {
            if (pairs[pa].first != s && pairs[pa].second != s) continue;
            for (std::uint64_t pb = 0; pb < pair_count; ++pb) {
                if (pb == pa) continue;
                if (pairs[pb].first != s && pairs[pb].second != s) continue;
                gadgets.push_back({s, pa, pb});
            }
        }

    const std::uint64_t universe = pair_count + gadgets.size() * 2 * bits;
    const auto cell = [&](std::uint64_t gadget, std::uint64_t bit_pos, std::uint64_t value) {
        return pair_count + gadget * 2 * bits + bit_pos * 2 + value;
    };

    std::vector<core::SetEntry> sets;
    std::map<std::uint64_t, std::string> labels;
    std::uint64_t next_id = 0;
    for (std::uint64_t pid = 0; pid < pair_count; ++pid) {
        const auto [si, sj] = pairs[pid];
        for (const auto& [eu, ev] : graph.edges()) {
            for (int orient = 0; orient < 2; ++orient) {
                const std::uint64_t at_i = orient == 0 ? eu : ev;
                const std::uint64_t at_j = orient == 0 ? ev : eu;
                core::SetEntry entry{next_id, 1, {pid}};
                for (std::uint64_t g = 0; g < gadgets.size(); ++g) {
                    const Gadget& gd = gadgets[g];
                    if (gd.left_pair == pid && (gd.slot == si || gd.slot == sj)) {
                        const std::uint64_t v = gd.slot == si ? at_i : at_j;
                        for (std::uint64_t b = 0; b < bits; ++b)
                            entry.elements.push_back(cell(g, b, v >> b & 1));
                    }
                    if (gd.right_pair == pid && (gd.slot == si || gd.slot == sj)) {
                        const std::uint64_t v = gd.slot == si ? at_i : at_j;
                        for (std::uint64_t b = 0; b < bits; ++b)
                            entry.elements.push_back(cell(g, b, 1 - (v >> b & 1)));
                    }
                }
                std::sort(entry.elements.begin(), entry.elements.end());
                labels[next_id] = "pair(" + std::to_string(si) + "," + std::to_string(sj) +
                                  ") " + std::to_string(at_i) + "@" + std::to_string(si) + "," +
                                  std::to_string(at_j) + "@" + std::to_string(sj);
                sets.push_back(std::move(entry));
                ++next_id;
            }
        }
    }
    core::SetCoverInstance out(universe, std::move(sets),
                               static_cast<std::int64_t>(pair_count));
    out.attach_labels(std::move(labels), {});
    return out;
}

CliqueReduction setcover_to_clique(const core::SetCoverInstance& gamma, std::uint64_t k) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    const std::uint64_t n = gamma.sets().size();
    if (n < 2) throw std::invalid_argument("need at least 2 sets");

    // group_size = floor(log n / log k), exactly: largest g with k^g <= n.
    std::uint64_t group_size = 0;
    unsigned __int128 kp = 1;
    while (kp * k <= n) {
        kp *= k;
        ++group_size;
    }
    if (group_size == 0)
        throw std::invalid_argument("group size floor(log n/log k) is zero: need |S| >= k");
    if (gamma.universe_size() % group_size != 0)
        throw std::invalid_argument("universe size " + std::to_string(gamma.universe_size()) +
                                    " is not divisible by the group size " +
                                    std::to_string(group_size));
    const std::uint64_t groups = gamma.universe_size() / group_size;
    const std::uint64_t w_part = pow_u64(k, group_size);

    std::vector<std::vector<bool>> covers(n, std::vector<bool>(gamma.universe_size(), false));
    for (std::uint64_t s = 0; s < n; ++s)
        for (std::uint64_t e : gamma.sets()[s].elements) covers[s][e] = true;

    CliqueReduction red{core::SimpleGraph(0, {}), k, k + groups, groups, group_size, n, w_part};
    const std::uint64_t total = k * n + groups * w_part;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;

    // Complete between distinct V-parts and between distinct W-parts.
    for (std::uint64_t i = 0; i < k; ++i)
        for (std::uint64_t j = i + 1; j < k; ++j)
            for (std::uint64_t a = 0; a < n; ++a)
                for (std::uint64_t b = 0; b < n; ++b)
                    edges.emplace_back(red.v_vertex(i, a), red.v_vertex(j, b));
    for (std::uint64_t i = 0; i < groups; ++i)
        for (std::uint64_t j = i + 1; j < groups; ++j)
            for (std::uint64_t a = 0; a < w_part; ++a)
                for (std::uint64_t b = 0; b < w_part; ++b)
                    edges.emplace_back(red.w_vertex(i, a), red.w_vertex(j, b));

    // V-W constraint edges: tuple coordinate assigned to part i must be coverable.
    std::vector<std::uint64_t> kpow(group_size + 1, 1);
    for (std::uint64_t i = 1; i <= group_size; ++i) kpow[i] = kpow[i - 1] * k;
    for (std::uint64_t part = 0; part < k; ++part) {
        for (std::uint64_t s = 0; s < n; ++s) {
            for (std::uint64_t j = 0; j < groups; ++j) {
                for (std::uint64_t tup = 0; tup < w_part; ++tup) {
                    bool ok = true;
                    for (std::uint64_t l = 0; l < group_size && ok; ++l) {
                        const std::uint64_t assigned = tup / kpow[group_size - 1 - l] % k;
                        if (assigned == part) ok = covers[s][j * group_size + l];
                    }
                    if (ok) edges.emplace_back(red.v_vertex(part, s), red.w_vertex(j, tup));
                }
            }
        }
    }
    red.graph = core::SimpleGraph(total, std::move(edges));
    return red;
}

GapThresholds gap_thresholds(const threshold::ThresholdParams& params, std::uint64_t c) {
    GapThresholds th;
    const auto m = static_cast<std::int64_t>(params.parts_b);
    const auto k = static_cast<std::int64_t>(params.parts_a);
    th.completeness_weight = 2 * m;
    th.soundness_b = (Rational(1, 1) - params.epsilon) * Rational(m, 1) *
                     Rational(static_cast<std::int64_t>(c), 1);
    // floor(m*h/k): largest s with s^2*k^2*den <= m^2*num for h^2 = num/den.
    const auto num = static_cast<unsigned __int128>(params.h_squared.num);
    const auto den = static_cast<unsigned __int128>(params.h_squared.den);
    const unsigned __int128 lhs_target = static_cast<unsigned __int128>(m) * m * num;
    std::uint64_t s = floor_sqrt_u128(lhs_target / (den * k * k));
    while (static_cast<unsigned __int128>(s) * s * den * k * k > lhs_target) --s;
    while (static_cast<unsigned __int128>(s + 1) * (s + 1) * den * k * k <= lhs_target) ++s;
    const auto floor_a = static_cast<std::int64_t>(s);
    th.soundness_floor = std::min<std::int64_t>(floor_a, th.soundness_b.floor());
    return th;
}

GapCertificate certify_gap(const core::SetCoverInstance& gamma, const ComposedInstance& reduced,
                           const threshold::ThresholdGraph& graph, std::uint64_t c,
                           std::uint64_t k, const solvers::SolverBudget& budget) {
    const auto start = std::chrono::steady_clock::now();
    GapCertificate cert;
    cert.original_hash = core::hash_hex(core::instance_hash(gamma));
    cert.reduced_hash = core::hash_hex(core::instance_hash(reduced.instance));

    // Reductions are deterministic, so re-running the composition is the
    // strongest provenance check available.
    try {
        const ComposedInstance replay = compose(gamma, graph, c);
        cert.provenance_ok =
            core::instance_hash(replay.instance) == core::instance_hash(reduced.instance) &&
            k == graph.params().parts_a;
    } catch (const std::exception&) {
        cert.provenance_ok = false;
    }

    const GapThresholds th = gap_thresholds(graph.params(), c);
    cert.completeness_weight = th.completeness_weight;
    cert.soundness_floor = th.soundness_floor;

    const solvers::ExactResult orig = solvers::exact_weighted_opt(gamma, budget);
    bool opt_le_k = false, opt_gt_k = false;
    switch (orig.status) {
        case solvers::SolveStatus::optimal:
            cert.original_opt_status = "optimal";
            cert.original_opt = orig.opt_weight;
            opt_le_k = orig.opt_weight <= static_cast<std::int64_t>(k);
            opt_gt_k = !opt_le_k;
            break;
        case solvers::SolveStatus::infeasible:
            cert.original_opt_status = "infeasible";
            opt_gt_k = true;
            break;
        case solvers::SolveStatus::bound_certified:
            cert.original_opt_status = "bound_certified";
            opt_gt_k = orig.certified_no_cover_leq >= static_cast<std::int64_t>(k);
            break;
        default:
            cert.original_opt_status = "unverified";
            break;
    }

    if (opt_le_k) {
        cert.completeness_applicable = true;
        const core::Solution witness = assemble_completeness_witness(
            reduced, graph, gamma, orig.witness.chosen_set_ids);
        const core::CoverReport rep = core::verify_cover(reduced.instance, witness);
        cert.witness_weight = rep.total_weight;
        cert.completeness_pass = rep.covered && rep.total_weight == th.completeness_weight;
    } else if (opt_gt_k) {
        cert.soundness_applicable = true;
        const solvers::CoverDecision dec =
            solvers::decide_cover_within(reduced.instance, th.soundness_floor, budget);
        if (dec.status == solvers::DecisionStatus::no_cover) {
            cert.soundness_pass = true;
            cert.soundness_status = "certified";
        } else if (dec.status == solvers::DecisionStatus::cover_found) {
            cert.soundness_pass = false;
            cert.soundness_status = "certified";
        } else {
            cert.soundness_pass = false;
            cert.soundness_status = "unverified";
        }
    }

    cert.pass = cert.provenance_ok &&
                ((cert.completeness_applicable && cert.completeness_pass) ||
                 (cert.soundness_applicable && cert.soundness_pass));
    cert.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    return cert;
}

} // namespace gapforge::reductions
