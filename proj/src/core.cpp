#include "gapforge/core.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace gapforge::core {

SetCoverInstance::SetCoverInstance(std::uint64_t universe_size, std::vector<SetEntry> sets,
                                   std::optional<std::int64_t> parameter_k)
    : universe_size_(universe_size), sets_(std::move(sets)), parameter_k_(parameter_k) {
    if (parameter_k_ && *parameter_k_ <= 0)
        throw std::invalid_argument("parameter k must be positive");
    __int128 weight_sum = 0;
    index_.reserve(sets_.size());
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        const SetEntry& s = sets_[i];
        if (!index_.emplace(s.id, i).second)
            throw std::invalid_argument("duplicate set id " + std::to_string(s.id));
        if (s.weight < 1)
            throw std::invalid_argument("set " + std::to_string(s.id) + " has weight < 1");
        weight_sum += s.weight;
        if (weight_sum > std::numeric_limits<std::int64_t>::max())
            throw std::invalid_argument("total weight overflows a 64-bit accumulator");
        for (std::size_t j = 0; j < s.elements.size(); ++j) {
            if (s.elements[j] >= universe_size_)
                throw std::invalid_argument("set " + std::to_string(s.id) +
                                            " references element " + std::to_string(s.elements[j]) +
                                            " >= universe size " + std::to_string(universe_size_));
            if (j > 0 && s.elements[j] <= s.elements[j - 1])
                throw std::invalid_argument("set " + std::to_string(s.id) +
                                            " has unsorted or duplicate elements");
        }
    }
}

const SetEntry* SetCoverInstance::find_set(std::uint64_t id) const {
    const auto it = index_.find(id);
    return it == index_.end() ? nullptr : &sets_[it->second];
}

std::optional<std::size_t> SetCoverInstance::index_of(std::uint64_t id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void SetCoverInstance::attach_labels(std::map<std::uint64_t, std::string> set_labels,
                                     std::map<std::uint64_t, std::string> element_labels) {
    set_labels_ = std::move(set_labels);
    element_labels_ = std::move(element_labels);
}

Solution make_solution(const SetCoverInstance& instance, std::vector<std::uint64_t> ids) {
    Solution sol;
    sol.chosen_set_ids = std::move(ids);
    std::vector<std::uint64_t> sorted = sol.chosen_set_ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("solution contains a duplicate set id");
    for (std::uint64_t id : sol.chosen_set_ids) {
        const SetEntry* s = instance.find_set(id);
        if (!s) throw std::invalid_argument("unknown set id " + std::to_string(id));
        sol.total_weight += s->weight;
    }
    return sol;
}

CoverReport verify_cover(const SetCoverInstance& instance, const Solution& solution) {
    CoverReport report;
    std::vector<bool> covered(instance.universe_size(), false);
    for (std::uint64_t id : solution.chosen_set_ids) {
        const SetEntry* s = instance.find_set(id);
        if (!s) throw std::invalid_argument("unknown set id " + std::to_string(id));
        report.total_weight += s->weight;
        for (std::uint64_t e : s->elements) covered[e] = true;
    }
    for (std::uint64_t e = 0; e < instance.universe_size(); ++e)
        if (!covered[e]) report.uncovered_elements.push_back(e);
    report.covered = report.uncovered_elements.empty();
    return report;
}

int chi_of(const SetCoverInstance& instance) {
    std::vector<std::int64_t> weights;
    weights.reserve(instance.sets().size());
    for (const SetEntry& s : instance.sets()) weights.push_back(s.weight);
    std::sort(weights.begin(), weights.end());
    weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
    return static_cast<int>(weights.size());
}

bool is_unweighted(const SetCoverInstance& instance) {
    for (const SetEntry& s : instance.sets())
        if (s.weight != 1) return false;
    return true;
}

SimpleGraph::SimpleGraph(std::uint64_t vertex_count,
                         std::vector<std::pair<std::uint64_t, std::uint64_t>> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
    for (auto& [u, v] : edges_) {
        if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
        if (u >= vertex_count_ || v >= vertex_count_)
            throw std::invalid_argument("edge endpoint out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("duplicate edge");
}

bool SimpleGraph::adjacent(std::uint64_t u, std::uint64_t v) const {
    if (u == v) return false;
    if (u > v) std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(u, v));
}

namespace {

struct Fnv1a {
    std::uint64_t h = 1469598103934665603ULL;
    void bytes(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void i64(std::int64_t v) { bytes(&v, sizeof v); }
    void tag(char c) { bytes(&c, 1); }
};

} // namespace

std::uint64_t instance_hash(const SetCoverInstance& instance) {
    Fnv1a f;
    f.tag('S');
    f.u64(instance.universe_size());
    f.i64(instance.parameter_k() ? *instance.parameter_k() : -1);
    for (const SetEntry& s : instance.sets()) {
        f.tag('s');
        f.u64(s.id);
        f.i64(s.weight);
        f.u64(s.elements.size());
        for (std::uint64_t e : s.elements) f.u64(e);
    }
    return f.h;
}

std::uint64_t graph_hash(const SimpleGraph& graph) {
    Fnv1a f;
    f.tag('G');
    f.u64(graph.vertex_count());
    for (const auto& [u, v] : graph.edges()) {
        f.u64(u);
        f.u64(v);
    }
    return f.h;
}

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace gapforge::core
