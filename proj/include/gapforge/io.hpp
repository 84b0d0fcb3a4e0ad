#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "gapforge/core.hpp"

namespace gapforge::io {

struct Provenance {
    std::string reduction;
    nlohmann::json parameters; // flat object of the reduction's parameters
    std::string input_hash;    // hex hash of the source instance
};

// On-disk representation: {"kind": "setcover"|"graph", ...}. Exactly one of
// setcover/graph is populated; "k" maps to the set-cover parameter or the
// graph-side clique parameter.
struct InstanceFile {
    std::string kind;
    std::optional<core::SetCoverInstance> setcover;
    std::optional<core::SimpleGraph> graph;
    std::optional<std::int64_t> graph_k;
    std::optional<Provenance> provenance;

    static InstanceFile of(core::SetCoverInstance instance);
    static InstanceFile of(core::SimpleGraph graph, std::optional<std::int64_t> k = std::nullopt);
};

nlohmann::json to_json(const InstanceFile& file);
InstanceFile instance_file_from_json(const nlohmann::json& j); // validates the schema

std::string content_hash_hex(const InstanceFile& file);

InstanceFile load_instance_file(const std::filesystem::path& path);
void save_instance_file(const std::filesystem::path& path, const InstanceFile& file);

// Write-to-temp-then-rename, so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// One line per set: "s <id> <weight> <elements...>"; header carries sizes.
std::string to_dimacs(const core::SetCoverInstance& instance);

} // namespace gapforge::io
