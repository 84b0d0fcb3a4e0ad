#include "gapforge/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gapforge::io {

using nlohmann::json;

InstanceFile InstanceFile::of(core::SetCoverInstance instance) {
    InstanceFile f;
    f.kind = "setcover";
    f.setcover = std::move(instance);
    return f;
}

InstanceFile InstanceFile::of(core::SimpleGraph graph, std::optional<std::int64_t> k) {
    InstanceFile f;
    f.kind = "graph";
    f.graph = std::move(graph);
    f.graph_k = k;
    return f;
}

namespace {

json labels_to_json(const std::map<std::uint64_t, std::string>& labels) {
    json j = json::object();
    for (const auto& [id, text] : labels) j[std::to_string(id)] = text;
    return j;
}

std::map<std::uint64_t, std::string> labels_from_json(const json& j) {
    std::map<std::uint64_t, std::string> out;
    for (const auto& [key, value] : j.items()) out[std::stoull(key)] = value.get<std::string>();
    return out;
}

} // namespace

json to_json(const InstanceFile& file) {
    json j;
    j["kind"] = file.kind;
    if (file.kind == "setcover") {
        const auto& inst = *file.setcover;
        j["universe_size"] = inst.universe_size();
        json sets = json::array();
        for (const auto& s : inst.sets())
            sets.push_back({{"id", s.id}, {"weight", s.weight}, {"elements", s.elements}});
        j["sets"] = std::move(sets);
        if (inst.parameter_k()) j["k"] = *inst.parameter_k();
        if (!inst.set_labels().empty() || !inst.element_labels().empty()) {
            json labels;
            if (!inst.set_labels().empty()) labels["sets"] = labels_to_json(inst.set_labels());
            if (!inst.element_labels().empty())
                labels["elements"] = labels_to_json(inst.element_labels());
            j["labels"] = std::move(labels);
        }
    } else if (file.kind == "graph") {
        const auto& g = *file.graph;
        j["vertex_count"] = g.vertex_count();
        json edges = json::array();
        for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
        j["edges"] = std::move(edges);
        if (file.graph_k) j["k"] = *file.graph_k;
    } else {
        throw std::invalid_argument("unknown instance kind: " + file.kind);
    }
    if (file.provenance) {
        j["provenance"] = {{"reduction", file.provenance->reduction},
                           {"parameters", file.provenance->parameters},
                           {"input_hash", file.provenance->input_hash}};
    }
    return j;
}

InstanceFile instance_file_from_json(const json& j) {
    InstanceFile file;
    file.kind = j.at("kind").get<std::string>();
    if (file.kind == "setcover") {
        const auto universe = j.at("universe_size").get<std::uint64_t>();
        std::vector<core::SetEntry> sets;
        for (const auto& js : j.at("sets")) {
            core::SetEntry s;
            s.id = js.at("id").get<std::uint64_t>();
            s.weight = js.at("weight").get<std::int64_t>();
            s.elements = js.at("elements").get<std::vector<std::uint64_t>>();
            sets.push_back(std::move(s));
        }
        std::optional<std::int64_t> k;
        if (j.contains("k")) k = j.at("k").get<std::int64_t>();
        core::SetCoverInstance inst(universe, std::move(sets), k);
        if (j.contains("labels")) {
            const auto& labels = j.at("labels");
            inst.attach_labels(
                labels.contains("sets") ? labels_from_json(labels.at("sets"))
                                        : std::map<std::uint64_t, std::string>{},
                labels.contains("elements") ? labels_from_json(labels.at("elements"))
                                            : std::map<std::uint64_t, std::string>{});
        }
        file.setcover = std::move(inst);
    } else if (file.kind == "graph") {
        const auto vertices = j.at("vertex_count").get<std::uint64_t>();
        std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
        for (const auto& je : j.at("edges")) {
            if (!je.is_array() || je.size() != 2)
                throw std::invalid_argument("graph edge must be a pair");
            edges.emplace_back(je[0].get<std::uint64_t>(), je[1].get<std::uint64_t>());
        }
        file.graph = core::SimpleGraph(vertices, std::move(edges));
        if (j.contains("k")) file.graph_k = j.at("k").get<std::int64_t>();
    } else {
        throw std::invalid_argument("unknown instance kind: " + file.kind);
    }
    if (j.contains("provenance")) {
        const auto& jp = j.at("provenance");
        Provenance p;
        p.reduction = jp.at("reduction").get<std::string>();
        p.parameters = jp.value("parameters", json::object());
        p.input_hash = jp.at("input_hash").get<std::string>();
        file.provenance = std::move(p);
    }
    return file;
}

std::string content_hash_hex(const InstanceFile& file) {
    if (file.kind == "setcover") return core::hash_hex(core::instance_hash(*file.setcover));
    return core::hash_hex(core::graph_hash(*file.graph));
}

InstanceFile load_instance_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    json j;
    in >> j;
    return instance_file_from_json(j);
}

void save_instance_file(const std::filesystem::path& path, const InstanceFile& file) {
    write_file_atomic(path, to_json(file).dump(2) + "\n");
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << contents;
    }
    std::filesystem::rename(tmp, path);
}

std::string to_dimacs(const core::SetCoverInstance& instance) {
    std::ostringstream out;
    out << "p setcover " << instance.universe_size() << " " << instance.sets().size() << "\n";
    for (const auto& s : instance.sets()) {
        out << "s " << s.id << " " << s.weight;
        for (std::uint64_t e : s.elements) out << " " << e;
        out << "\n";
    }
    return out.str();
}

} // namespace gapforge::io
