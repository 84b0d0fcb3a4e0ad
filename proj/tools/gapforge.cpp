#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gapforge/core.hpp"
#include "gapforge/ecc.hpp"
#include "gapforge/errors.hpp"
#include "gapforge/io.hpp"
#include "gapforge/presets.hpp"
#include "gapforge/reductions.hpp"
#include "gapforge/rng.hpp"
#include "gapforge/solvers.hpp"
#include "gapforge/threshold.hpp"

namespace gf = gapforge;
using nlohmann::json;

namespace {

// Exit codes: 0 success/pass, 1 verification failure, 2 usage error, 3 budget exhausted.
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::int64_t default_budget_ms() {
    if (const char* env = std::getenv("GAPFORGE_BUDGET_MS")) {
        try {
            return std::stoll(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("GAPFORGE_BUDGET_MS is not an integer");
        }
    }
    return 0; // unlimited
}

gf::Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return gf::Rational(std::stoll(text), 1);
    return gf::Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
}

std::vector<std::int64_t> parse_weights(const std::string& text) {
    std::vector<std::int64_t> weights;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        const auto end = comma == std::string::npos ? text.size() : comma;
        weights.push_back(std::stoll(text.substr(pos, end - pos)));
        pos = end + 1;
    }
    if (weights.empty()) throw std::invalid_argument("empty weight list");
    return weights;
}

gf::core::SetCoverInstance random_setcover(std::uint64_t elements, std::uint64_t sets,
                                           double density, std::uint64_t seed,
                                           const std::vector<std::int64_t>& weights,
                                           std::optional<std::int64_t> k) {
    gf::SeededRng rng(seed);
    std::vector<gf::core::SetEntry> entries(sets);
    for (std::uint64_t s = 0; s < sets; ++s) {
        entries[s].id = s;
        entries[s].weight = weights[rng.below(weights.size())];
        for (std::uint64_t e = 0; e < elements; ++e)
            if (rng.chance(density)) entries[s].elements.push_back(e);
    }
    // Repair uncoverable elements so generated instances always admit a cover.
    if (sets > 0) {
        std::vector<bool> covered(elements, false);
        for (const auto& s : entries)
            for (std::uint64_t e : s.elements) covered[e] = true;
        for (std::uint64_t e = 0; e < elements; ++e) {
            if (!covered[e]) {
                auto& elems = entries[rng.below(sets)].elements;
                elems.insert(std::lower_bound(elems.begin(), elems.end(), e), e);
            }
        }
    }
    return gf::core::SetCoverInstance(elements, std::move(entries), k);
}

gf::core::SimpleGraph random_graph(std::uint64_t vertices, double density, std::uint64_t seed) {
    gf::SeededRng rng(seed);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
    for (std::uint64_t u = 0; u < vertices; ++u)
        for (std::uint64_t v = u + 1; v < vertices; ++v)
            if (rng.chance(density)) edges.emplace_back(u, v);
    return gf::core::SimpleGraph(vertices, std::move(edges));
}

struct ThresholdFlags {
    std::uint64_t p = 5, r = 2, m = 4, k = 2;
    std::string epsilon = "1/2";
};

gf::threshold::ThresholdGraph build_graph(const ThresholdFlags& f) {
    auto book = std::make_shared<const gf::ecc::Codebook>(
        gf::ecc::enumerate_codebook(gf::ecc::CodeSpec::reed_solomon(f.p, f.r, f.m)));
    return gf::threshold::ThresholdGraph::build(book, f.k, parse_rational(f.epsilon));
}

json params_json(const gf::threshold::ThresholdParams& p) {
    return {{"n", p.part_size_a},
            {"k", p.parts_a},
            {"t", p.part_size_b},
            {"m", p.parts_b},
            {"h", p.h_approx()},
            {"h_squared", p.h_squared.str()},
            {"epsilon", p.epsilon.str()}};
}

json solution_json(const gf::core::Solution& s) {
    return {{"chosen_set_ids", s.chosen_set_ids}, {"total_weight", s.total_weight}};
}

json preset_json(const gf::reductions::PipelineParams& p) {
    json j{{"preset", p.preset},
           {"log2_n", p.log2_n},
           {"k", p.k},
           {"r", p.r},
           {"m", p.m},
           {"c", p.c},
           {"sigma", p.sigma},
           {"epsilon", p.epsilon.str()},
           {"delta", p.delta.str()},
           {"h_squared", p.h_squared.str()},
           {"completeness_weight", p.completeness_weight},
           {"soundness_floor", p.soundness_floor},
           {"degenerate", p.degenerate},
           {"log2_a_side", p.log2_a_side},
           {"notes", p.notes}};
    if (p.preset == "derand") {
        j["sigma_prime"] = p.sigma_prime;
        j["R"] = p.big_r;
        j["M"] = p.big_m;
        j["delta_outer"] = p.delta_outer.str();
        j["delta_inner"] = p.delta_inner.str();
    }
    return j;
}

int cmd_gen(const std::string& out, bool graph_kind, std::uint64_t elements, std::uint64_t sets,
            std::uint64_t vertices, double density, std::uint64_t seed,
            const std::string& weights_text, std::optional<std::int64_t> k) {
    gf::io::InstanceFile file;
    if (graph_kind) {
        file = gf::io::InstanceFile::of(random_graph(vertices, density, seed), k);
    } else {
        file = gf::io::InstanceFile::of(
            random_setcover(elements, sets, density, seed, parse_weights(weights_text), k));
    }
    gf::io::Provenance prov;
    prov.reduction = "gen";
    prov.parameters = {{"seed", seed}, {"density", density}, {"prng", gf::SeededRng::name()}};
    prov.input_hash = gf::io::content_hash_hex(file);
    file.provenance = prov;
    gf::io::save_instance_file(out, file);
    std::cout << json{{"written", out}, {"hash", gf::io::content_hash_hex(file)}}.dump(2)
              << std::endl;
    return kExitPass;
}

int cmd_reduce_compose(const std::string& in, const std::string& out, const ThresholdFlags& tf,
                       std::uint64_t c, bool labels) {
    const gf::io::InstanceFile src = gf::io::load_instance_file(in);
    if (!src.setcover) throw std::invalid_argument("compose expects a setcover instance");
    const auto graph = build_graph(tf);
    gf::reductions::ComposeOptions opt;
    opt.emit_labels = labels;
    gf::reductions::ComposedInstance composed = gf::reductions::compose(*src.setcover, graph, c, opt);

    gf::io::InstanceFile dst = gf::io::InstanceFile::of(std::move(composed.instance));
    gf::io::Provenance prov;
    prov.reduction = "compose";
    prov.parameters = {{"p", tf.p},     {"r", tf.r},  {"m", tf.m},
                       {"k", tf.k},     {"c", c},     {"epsilon", tf.epsilon},
                       {"eval_points", "0..m-1"}};
    prov.input_hash = gf::io::content_hash_hex(src);
    dst.provenance = prov;
    gf::io::save_instance_file(out, dst);
    std::cout << json{{"written", out},
                      {"sets", dst.setcover->sets().size()},
                      {"universe", dst.setcover->universe_size()},
                      {"graph", params_json(graph.params())}}
                     .dump(2)
              << std::endl;
    return kExitPass;
}

int cmd_reduce_simple(const std::string& which, const std::string& in, const std::string& out,
                      std::uint64_t k) {
    const gf::io::InstanceFile src = gf::io::load_instance_file(in);
    gf::io::InstanceFile dst;
    json params = json::object();
    if (which == "remove-weights") {
        if (!src.setcover) throw std::invalid_argument("remove-weights expects a setcover instance");
        dst = gf::io::InstanceFile::of(gf::reductions::remove_weights(*src.setcover));
    } else if (which == "clique-to-setcover") {
        if (!src.graph) throw std::invalid_argument("clique-to-setcover expects a graph instance");
        dst = gf::io::InstanceFile::of(
            gf::reductions::clique_to_setcover_small_universe(*src.graph, k));
        params["k"] = k;
    } else { // setcover-to-clique
        if (!src.setcover) throw std::invalid_argument("setcover-to-clique expects a setcover instance");
        gf::reductions::CliqueReduction red = gf::reductions::setcover_to_clique(*src.setcover, k);
        dst = gf::io::InstanceFile::of(std::move(red.graph),
                                       static_cast<std::int64_t>(red.k_prime));
        params = {{"k", k},
                  {"k_prime", red.k_prime},
                  {"groups", red.groups},
                  {"group_size", red.group_size}};
    }
    gf::io::Provenance prov;
    prov.reduction = which;
    prov.parameters = params;
    prov.input_hash = gf::io::content_hash_hex(src);
    dst.provenance = prov;
    gf::io::save_instance_file(out, dst);
    std::cout << json{{"written", out}, {"hash", gf::io::content_hash_hex(dst)}}.dump(2)
              << std::endl;
    return kExitPass;
}

int cmd_verify_threshold(const ThresholdFlags& tf, std::int64_t max_x,
                         const std::string& delete_b) {
    gf::threshold::ThresholdGraph graph = build_graph(tf);
    if (!delete_b.empty()) {
        const auto comma = delete_b.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("--delete-b expects \"part,index\"");
        graph = graph.with_b_vertex_deleted({std::stoull(delete_b.substr(0, comma)),
                                             std::stoull(delete_b.substr(comma + 1))});
    }
    const auto covering = gf::threshold::check_covering_property(graph);
    json j{{"params", params_json(graph.params())},
           {"covering", {{"holds", covering.holds}, {"tuples_checked", covering.tuples_checked}}}};
    if (covering.counterexample) {
        j["covering"]["counterexample"] = {
            {"codeword_per_part", covering.counterexample->codeword_per_part},
            {"b_part", covering.counterexample->b_part}};
    }
    bool holds = covering.holds;
    if (max_x >= 0) {
        const std::uint64_t bound =
            max_x == 0 ? static_cast<std::uint64_t>(graph.params().h_floor())
                       : static_cast<std::uint64_t>(max_x);
        const auto sweep = gf::threshold::sweep_threshold_soundness(graph, bound);
        j["soundness"] = {{"holds", sweep.holds},
                          {"max_x_size", bound},
                          {"x_subsets_checked", sweep.x_subsets_checked},
                          {"witness_evaluations", sweep.witness_evaluations}};
        holds = holds && sweep.holds;
    }
    j["pass"] = holds;
    std::cout << j.dump(2) << std::endl;
    return holds ? kExitPass : kExitFail;
}

int cmd_verify_gap(const std::string& original_path, const std::string& reduced_path,
                   const gf::solvers::SolverBudget& budget) {
    const gf::io::InstanceFile original = gf::io::load_instance_file(original_path);
    const gf::io::InstanceFile reduced = gf::io::load_instance_file(reduced_path);
    if (!original.setcover || !reduced.setcover)
        throw std::invalid_argument("gap verification expects two setcover instances");
    if (!reduced.provenance || reduced.provenance->reduction != "compose")
        throw std::invalid_argument("reduced file lacks compose provenance");
    const json& jp = reduced.provenance->parameters;
    ThresholdFlags tf;
    tf.p = jp.at("p").get<std::uint64_t>();
    tf.r = jp.at("r").get<std::uint64_t>();
    tf.m = jp.at("m").get<std::uint64_t>();
    tf.k = jp.at("k").get<std::uint64_t>();
    tf.epsilon = jp.at("epsilon").get<std::string>();
    const auto c = jp.at("c").get<std::uint64_t>();

    const auto graph = build_graph(tf);
    gf::reductions::ComposeOptions opt;
    gf::reductions::ComposedInstance composed = gf::reductions::compose(*original.setcover, graph, c, opt);
    // The loaded file must match the replayed reduction bit for bit.
    const bool file_hash_ok =
        gf::core::instance_hash(*reduced.setcover) == gf::core::instance_hash(composed.instance) &&
        reduced.provenance->input_hash == gf::io::content_hash_hex(original);

    const auto cert = gf::reductions::certify_gap(*original.setcover, composed, graph, c, tf.k, budget);
    json j{{"provenance_ok", cert.provenance_ok && file_hash_ok},
           {"original_hash", cert.original_hash},
           {"reduced_hash", cert.reduced_hash},
           {"original_opt_status", cert.original_opt_status},
           {"original_opt", cert.original_opt},
           {"thresholds",
            {{"completeness_weight", cert.completeness_weight},
             {"soundness_floor", cert.soundness_floor}}},
           {"completeness",
            {{"applicable", cert.completeness_applicable},
             {"pass", cert.completeness_pass},
             {"witness_weight", cert.witness_weight}}},
           {"soundness",
            {{"applicable", cert.soundness_applicable},
             {"pass", cert.soundness_pass},
             {"status", cert.soundness_status}}},
           {"wall_ms", cert.wall_ms}};
    const bool pass = cert.pass && file_hash_ok;
    j["pass"] = pass;
    std::cout << j.dump(2) << std::endl;
    // Inconclusive solves (budget ran out before either bullet applied) are a
    // budget outcome, not a verification failure.
    const bool inconclusive = cert.soundness_status == "unverified" ||
                              (!cert.completeness_applicable && !cert.soundness_applicable &&
                               cert.provenance_ok && file_hash_ok);
    if (!pass && inconclusive) return kExitBudget;
    return pass ? kExitPass : kExitFail;
}

int cmd_verify_oracle(const std::string& in, std::optional<std::uint64_t> k,
                      const gf::solvers::SolverBudget& budget) {
    const gf::io::InstanceFile file = gf::io::load_instance_file(in);
    json j;
    bool pass = true;
    if (file.setcover) {
        const auto& inst = *file.setcover;
        if (inst.sets().size() > 20)
            throw std::invalid_argument("oracle mode enumerates all subsets; needs <= 20 sets");
        // Independent oracle: full subset enumeration.
        std::int64_t best = -1;
        const auto n = inst.sets().size();
        for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
            std::vector<bool> covered(inst.universe_size(), false);
            std::int64_t weight = 0;
            for (std::size_t s = 0; s < n; ++s) {
                if (!(mask >> s & 1)) continue;
                weight += inst.sets()[s].weight;
                for (std::uint64_t e : inst.sets()[s].elements) covered[e] = true;
            }
            if (std::find(covered.begin(), covered.end(), false) == covered.end())
                if (best < 0 || weight < best) best = weight;
        }
        const auto exact = gf::solvers::exact_weighted_opt(inst, budget);
        const bool solver_matches =
            (best < 0 && exact.status == gf::solvers::SolveStatus::infeasible) ||
            (best >= 0 && exact.status == gf::solvers::SolveStatus::optimal &&
             exact.opt_weight == best);
        pass = solver_matches;
        j["enumeration_opt"] = best;
        j["solver_matches_enumeration"] = solver_matches;
        if (best >= 0) {
            const auto g = gf::solvers::greedy(inst);
            j["greedy_weight"] = g.total_weight;
            j["greedy_feasible_and_bounded"] = g.total_weight >= best;
            pass = pass && g.total_weight >= best;
        }
    } else {
        if (!k) throw std::invalid_argument("oracle mode on a graph needs --k");
        const auto& graph = *file.graph;
        if (graph.vertex_count() > 16)
            throw std::invalid_argument("oracle mode enumerates vertex subsets; needs <= 16 vertices");
        bool naive = false;
        const std::uint64_t n = graph.vertex_count();
        for (std::uint64_t mask = 0; mask < (1ULL << n) && !naive; ++mask) {
            if (static_cast<std::uint64_t>(__builtin_popcountll(mask)) != *k) continue;
            bool clique = true;
            for (std::uint64_t u = 0; u < n && clique; ++u)
                for (std::uint64_t v = u + 1; v < n && clique; ++v)
                    if ((mask >> u & 1) && (mask >> v & 1)) clique = graph.adjacent(u, v);
            naive = clique;
        }
        const auto found = gf::solvers::exact_clique(graph, *k, budget);
        pass = found.found == naive;
        j["naive_clique"] = naive;
        j["solver_clique"] = found.found;
    }
    j["pass"] = pass;
    std::cout << j.dump(2) << std::endl;
    return pass ? kExitPass : kExitFail;
}

int cmd_solve(const std::string& in, const std::string& algo, std::uint64_t k, std::uint64_t t,
              const gf::solvers::SolverBudget& budget, std::int64_t max_weight) {
    const gf::io::InstanceFile file = gf::io::load_instance_file(in);
    json j{{"algo", algo}};
    if (algo == "clique") {
        if (!file.graph) throw std::invalid_argument("clique solving expects a graph instance");
        const std::uint64_t kk = k ? k : static_cast<std::uint64_t>(file.graph_k.value_or(0));
        if (kk == 0) throw std::invalid_argument("clique solving needs --k or a k in the file");
        const auto res = gf::solvers::exact_clique(*file.graph, kk, budget);
        j["k"] = kk;
        j["found"] = res.found;
        j["witness"] = res.witness;
        j["nodes"] = res.nodes_explored;
        std::cout << j.dump(2) << std::endl;
        return kExitPass;
    }
    if (!file.setcover) throw std::invalid_argument(algo + " expects a setcover instance");
    const auto& inst = *file.setcover;
    if (algo == "exact") {
        if (max_weight >= 0) {
            const auto dec = gf::solvers::decide_cover_within(inst, max_weight, budget);
            j["max_weight"] = max_weight;
            j["nodes"] = dec.nodes_explored;
            switch (dec.status) {
                case gf::solvers::DecisionStatus::cover_found:
                    j["status"] = "cover_found";
                    j["witness"] = solution_json(dec.witness);
                    break;
                case gf::solvers::DecisionStatus::no_cover:
                    j["status"] = "no_cover";
                    break;
                default:
                    j["status"] = "budget_exceeded";
                    std::cout << j.dump(2) << std::endl;
                    return kExitBudget;
            }
            std::cout << j.dump(2) << std::endl;
            return kExitPass;
        }
        const auto res = gf::solvers::exact_weighted_opt(inst, budget);
        j["nodes"] = res.nodes_explored;
        switch (res.status) {
            case gf::solvers::SolveStatus::optimal:
                j["status"] = "optimal";
                j["opt_weight"] = res.opt_weight;
                j["witness"] = solution_json(res.witness);
                break;
            case gf::solvers::SolveStatus::infeasible:
                j["status"] = "infeasible";
                j["uncoverable_elements"] = res.uncoverable_elements;
                break;
            case gf::solvers::SolveStatus::bound_certified:
                j["status"] = "bound_certified";
                j["certified_no_cover_leq"] = res.certified_no_cover_leq;
                std::cout << j.dump(2) << std::endl;
                return kExitBudget;
            default:
                j["status"] = "unknown";
                std::cout << j.dump(2) << std::endl;
                return kExitBudget;
        }
        std::cout << j.dump(2) << std::endl;
        return kExitPass;
    }
    if (algo == "greedy") {
        const auto sol = gf::solvers::greedy(inst);
        j["witness"] = solution_json(sol);
        std::cout << j.dump(2) << std::endl;
        return kExitPass;
    }
    if (algo == "block-greedy") {
        if (k == 0) throw std::invalid_argument("block-greedy needs --k");
        const auto res = gf::solvers::block_greedy(inst, k, t);
        j["covered"] = res.covered;
        j["rounds_planned"] = res.rounds_planned;
        j["pick_size"] = res.pick_size;
        j["witness"] = solution_json(res.solution);
        json rounds = json::array();
        for (const auto& r : res.rounds)
            rounds.push_back({{"chosen_ids", r.chosen_ids}, {"uncovered_after", r.uncovered_after}});
        j["rounds"] = std::move(rounds);
        std::cout << j.dump(2) << std::endl;
        return res.covered ? kExitPass : kExitFail;
    }
    throw std::invalid_argument("unknown algorithm: " + algo);
}

int cmd_preset(const std::string& theorem, const std::string& n_text, std::uint64_t k,
               std::uint64_t c0) {
    const auto n = gf::reductions::PresetSize::parse(n_text);
    gf::reductions::PipelineParams p;
    if (theorem == "w2")
        p = gf::reductions::preset_w2(n, k, c0);
    else if (theorem == "w1")
        p = gf::reductions::preset_w1(n, k);
    else if (theorem == "derand")
        p = gf::reductions::preset_derand(n, k);
    else
        throw std::invalid_argument("unknown theorem: " + theorem);
    std::cout << preset_json(p).dump(2) << std::endl;
    return kExitPass;
}

int cmd_export(const std::string& in, const std::string& dimacs_out) {
    const gf::io::InstanceFile file = gf::io::load_instance_file(in);
    if (!file.setcover) throw std::invalid_argument("dimacs export expects a setcover instance");
    gf::io::write_file_atomic(dimacs_out, gf::io::to_dimacs(*file.setcover));
    std::cout << json{{"written", dimacs_out}}.dump(2) << std::endl;
    return kExitPass;
}

int cmd_codebook(std::uint64_t p, std::uint64_t r, std::uint64_t m, bool measure) {
    const auto book = gf::ecc::enumerate_codebook(gf::ecc::CodeSpec::reed_solomon(p, r, m));
    json j{{"alphabet_size", book.alphabet_size},
           {"block_length", book.block_length},
           {"codeword_count", book.codewords.size()},
           {"declared_min_distance", book.declared_min_distance.str()},
           {"codewords", book.codewords}};
    if (measure) {
        const auto d = gf::ecc::min_relative_distance(book);
        j["measured_min_distance"] = d.distance.str();
        j["min_disagreements"] = d.min_disagreements;
    }
    std::cout << j.dump(2) << std::endl;
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gapforge: set-cover gap reductions, threshold graphs, and solver oracles"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random instance");
    std::string gen_out;
    bool gen_graph = false;
    std::uint64_t gen_elements = 8, gen_sets = 6, gen_vertices = 6, gen_seed = 1;
    double gen_density = 0.5;
    std::string gen_weights = "1";
    std::int64_t gen_k = -1;
    gen->add_option("--out", gen_out, "output file")->required();
    gen->add_flag("--graph", gen_graph, "generate a graph instead of a set system");
    gen->add_option("--elements", gen_elements, "universe size");
    gen->add_option("--sets", gen_sets, "number of sets");
    gen->add_option("--vertices", gen_vertices, "graph vertex count");
    gen->add_option("--density", gen_density, "membership/edge probability");
    gen->add_option("--seed", gen_seed, "PRNG seed");
    gen->add_option("--weights", gen_weights, "comma-separated weight choices");
    gen->add_option("--k", gen_k, "parameter k to record");

    // reduce
    auto* reduce = app.add_subcommand("reduce", "run a reduction");
    reduce->require_subcommand(1);
    std::string red_in, red_out;
    ThresholdFlags tf;
    std::uint64_t red_c = 1, red_k = 2;
    bool red_labels = false;
    auto* rc = reduce->add_subcommand("compose", "threshold-graph composition");
    rc->add_option("--in", red_in)->required();
    rc->add_option("--out", red_out)->required();
    rc->add_option("--p", tf.p, "field size (prime)");
    rc->add_option("--r", tf.r, "RS message length");
    rc->add_option("--m", tf.m, "RS block length");
    rc->add_option("--k", tf.k, "number of A-parts");
    rc->add_option("--c", red_c, "tuple arity")->required();
    rc->add_option("--epsilon", tf.epsilon, "epsilon as a fraction, e.g. 1/2");
    rc->add_flag("--labels", red_labels, "emit the human-readable label side-table");
    for (const char* name : {"remove-weights", "clique-to-setcover", "setcover-to-clique"}) {
        auto* sub = reduce->add_subcommand(name);
        sub->add_option("--in", red_in)->required();
        sub->add_option("--out", red_out)->required();
        if (std::string(name) != "remove-weights") sub->add_option("--k", red_k)->required();
    }

    // verify
    auto* verify = app.add_subcommand("verify", "verification modes");
    std::string verify_mode, verify_original, verify_reduced, verify_in, verify_delete_b;
    std::int64_t verify_max_x = -1;
    std::int64_t verify_k = -1;
    verify->add_option("--mode", verify_mode, "threshold-graph | gap | oracle")->required();
    verify->add_option("--p", tf.p);
    verify->add_option("--r", tf.r);
    verify->add_option("--m", tf.m);
    verify->add_option("--k", verify_k);
    verify->add_option("--epsilon", tf.epsilon);
    verify->add_option("--soundness-max-x", verify_max_x,
                       "sweep X up to this size (0 = floor(h)); omit to skip");
    verify->add_option("--delete-b", verify_delete_b, "fault injection: delete B-vertex part,index");
    verify->add_option("--original", verify_original);
    verify->add_option("--reduced", verify_reduced);
    verify->add_option("--in", verify_in);

    // solve
    auto* solve = app.add_subcommand("solve", "run a solver");
    std::string solve_in, solve_algo = "exact";
    std::uint64_t solve_k = 0, solve_t = 2;
    std::int64_t solve_max_weight = -1;
    std::uint64_t solve_max_nodes = 50000000;
    std::int64_t solve_ms = -1;
    solve->add_option("--in", solve_in)->required();
    solve->add_option("--algo", solve_algo, "exact | greedy | block-greedy | clique");
    solve->add_option("--k", solve_k);
    solve->add_option("--T", solve_t, "block-greedy T");
    solve->add_option("--max-weight", solve_max_weight, "decision mode: search covers up to this weight");
    solve->add_option("--max-nodes", solve_max_nodes);
    solve->add_option("--budget-ms", solve_ms, "wall budget (default: GAPFORGE_BUDGET_MS)");

    // preset
    auto* preset = app.add_subcommand("preset", "parameter calculators");
    std::string preset_theorem, preset_n;
    std::uint64_t preset_k = 4, preset_c0 = 1;
    preset->add_option("--theorem", preset_theorem, "w2 | w1 | derand")->required();
    preset->add_option("--n", preset_n, "instance size: integer or 2^e")->required();
    preset->add_option("--k", preset_k)->required();
    preset->add_option("--c0", preset_c0, "target constant ratio (w2)");

    // export
    auto* exp = app.add_subcommand("export", "export a set system");
    std::string exp_in, exp_dimacs;
    exp->add_option("--in", exp_in)->required();
    exp->add_option("--dimacs", exp_dimacs, "one line per set")->required();

    // codebook
    auto* cb = app.add_subcommand("codebook", "dump an RS codebook as JSON");
    std::uint64_t cb_p = 5, cb_r = 2, cb_m = 4;
    bool cb_measure = false;
    cb->add_option("--p", cb_p)->required();
    cb->add_option("--r", cb_r)->required();
    cb->add_option("--m", cb_m)->required();
    cb->add_flag("--measure", cb_measure, "also brute-force the minimum distance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        gf::solvers::SolverBudget budget;
        budget.max_nodes = solve_max_nodes;
        budget.wall_time_ms = solve_ms >= 0 ? solve_ms : default_budget_ms();
        if (gen->parsed())
            return cmd_gen(gen_out, gen_graph, gen_elements, gen_sets, gen_vertices, gen_density,
                           gen_seed, gen_weights,
                           gen_k >= 0 ? std::optional<std::int64_t>(gen_k) : std::nullopt);
        if (reduce->parsed()) {
            if (rc->parsed()) return cmd_reduce_compose(red_in, red_out, tf, red_c, red_labels);
            for (auto* sub : reduce->get_subcommands())
                if (sub->parsed())
                    return cmd_reduce_simple(sub->get_name(), red_in, red_out, red_k);
        }
        if (verify->parsed()) {
            if (verify_k >= 0) tf.k = static_cast<std::uint64_t>(verify_k);
            if (verify_mode == "threshold-graph")
                return cmd_verify_threshold(tf, verify_max_x, verify_delete_b);
            if (verify_mode == "gap") return cmd_verify_gap(verify_original, verify_reduced, budget);
            if (verify_mode == "oracle")
                return cmd_verify_oracle(verify_in,
                                         verify_k >= 0
                                             ? std::optional<std::uint64_t>(verify_k)
                                             : std::nullopt,
                                         budget);
            throw std::invalid_argument("unknown verify mode: " + verify_mode);
        }
        if (solve->parsed())
            return cmd_solve(solve_in, solve_algo, solve_k, solve_t, budget, solve_max_weight);
        if (preset->parsed()) return cmd_preset(preset_theorem, preset_n, preset_k, preset_c0);
        if (exp->parsed()) return cmd_export(exp_in, exp_dimacs);
        if (cb->parsed()) return cmd_codebook(cb_p, cb_r, cb_m, cb_measure);
        return kExitUsage;
    } catch (const gf::BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << std::endl;
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    }
}
