#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gapforge::core {

struct SetEntry {
    std::uint64_t id = 0;
    std::int64_t weight = 1;                // >= 1
    std::vector<std::uint64_t> elements;    // sorted, duplicate-free, < universe_size
};

// A bipartite set system: elements are the dense indices 0..universe_size-1,
// each set has a positive integer weight. Immutable after construction and
// safe to share across threads. Labels are a debug side-table only; no
// algorithm reads them.
class SetCoverInstance {
  public:
    SetCoverInstance(std::uint64_t universe_size, std::vector<SetEntry> sets,
                     std::optional<std::int64_t> parameter_k = std::nullopt);

    std::uint64_t universe_size() const { return universe_size_; }
    std::span<const SetEntry> sets() const { return sets_; }
    std::optional<std::int64_t> parameter_k() const { return parameter_k_; }

    const SetEntry* find_set(std::uint64_t id) const;
    std::optional<std::size_t> index_of(std::uint64_t id) const;

    const std::map<std::uint64_t, std::string>& set_labels() const { return set_labels_; }
    const std::map<std::uint64_t, std::string>& element_labels() const { return element_labels_; }
    void attach_labels(std::map<std::uint64_t, std::string> set_labels,
                       std::map<std::uint64_t, std::string> element_labels);

  private:
    std::uint64_t universe_size_;
    std::vector<SetEntry> sets_;
    std::optional<std::int64_t> parameter_k_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    std::map<std::uint64_t, std::string> set_labels_;
    std::map<std::uint64_t, std::string> element_labels_;
};

struct Solution {
    std::vector<std::uint64_t> chosen_set_ids; // duplicate-free
    std::int64_t total_weight = 0;
};

// Builds a Solution from ids, checking duplicate-freeness and existence and
// computing the weight from the instance.
Solution make_solution(const SetCoverInstance& instance, std::vector<std::uint64_t> ids);

struct CoverReport {
    bool covered = false;
    std::int64_t total_weight = 0;
    std::vector<std::uint64_t> uncovered_elements;
};

// Pure coverage check: covered iff the union of the chosen sets is the whole
// universe. Recomputes the weight from the instance; an unknown set id throws
// with the offending id in the message.
CoverReport verify_cover(const SetCoverInstance& instance, const Solution& solution);

// Number of distinct weights ("chi"). An instance is unweighted iff
// chi == 1 and that weight is 1.
int chi_of(const SetCoverInstance& instance);
bool is_unweighted(const SetCoverInstance& instance);

// Undirected simple graph: no self-loops, no duplicate edges. Edges are
// normalized to (min,max) and kept sorted.
class SimpleGraph {
  public:
    SimpleGraph(std::uint64_t vertex_count,
                std::vector<std::pair<std::uint64_t, std::uint64_t>> edges);

    std::uint64_t vertex_count() const { return vertex_count_; }
    std::span<const std::pair<std::uint64_t, std::uint64_t>> edges() const { return edges_; }
    bool adjacent(std::uint64_t u, std::uint64_t v) const;

  private:
    std::uint64_t vertex_count_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges_;
};

// Stable 64-bit content hashes (FNV-1a over a canonical byte encoding);
// used for provenance records.
std::uint64_t instance_hash(const SetCoverInstance& instance);
std::uint64_t graph_hash(const SimpleGraph& graph);
std::string hash_hex(std::uint64_t h);

} // namespace gapforge::core
