#include "dynatrack/result_io.hpp"

#include <json.hpp>

namespace dynatrack {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ValidationError(where + " must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(where + ": missing field \"" + key + "\"");
    return *it;
}

}  // namespace

std::string write_result(const ClusteringSequence& seq, const DynamicClustering& dcs) {
    const DynamicClustering canon = dcs.canonical(seq);
    json doc;
    doc["schema"] = result_schema;
    doc["tool"] = tool_name;
    doc["version"] = tool_version;
    doc["history"] = canon.history();
    doc["snapshot_count"] = seq.size();
    json snapshots = json::array();
    for (std::size_t t = 0; t < seq.size(); ++t) {
        json snap;
        snap["index"] = t;
        if (seq.label(t)) snap["label"] = *seq.label(t);
        json clusters = json::array();
        for (std::size_t c = 0; c < seq.cluster_count(t); ++c) {
            clusters.push_back({{"index", c},
                                {"dc", canon.label({t, c})},
                                {"members", seq.member_names({t, c})}});
        }
        snap["clusters"] = std::move(clusters);
        snapshots.push_back(std::move(snap));
    }
    doc["snapshots"] = std::move(snapshots);
    json registry = json::array();
    for (const auto& dc : canon.dcs()) {
        json refs = json::array();
        for (const auto& set : dc.clusters) {
            for (const auto& r : set) refs.push_back({r.time, r.cluster});
        }
        registry.push_back({{"id", dc.id}, {"presence", dc.presence}, {"clusters", std::move(refs)}});
    }
    doc["dcs"] = std::move(registry);
    return doc.dump(2) + "\n";
}

TrackedResult read_result(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError("JSON parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(column),
                         line, column);
    }
    const json& schema = field(doc, "schema", "result");
    if (!schema.is_number_integer() || schema.get<int>() != result_schema) {
        throw ValidationError("result: unsupported schema version");
    }
    const json& history = field(doc, "history", "result");
    if (!history.is_number_unsigned()) throw ValidationError("result: history must be a non-negative integer");
    const json& snapshots = field(doc, "snapshots", "result");
    if (!snapshots.is_array()) throw ValidationError("result: snapshots must be an array");

    std::vector<SnapshotInput> inputs;
    std::vector<std::vector<DcId>> labels;
    for (std::size_t t = 0; t < snapshots.size(); ++t) {
        const std::string where = "snapshots[" + std::to_string(t) + "]";
        const json& snap = snapshots[t];
        SnapshotInput in;
        if (snap.is_object() && snap.contains("label")) {
            if (!snap["label"].is_string()) throw ValidationError(where + ": label must be a string");
            in.label = snap["label"].get<std::string>();
        }
        const json& clusters = field(snap, "clusters", where);
        if (!clusters.is_array()) throw ValidationError(where + ": clusters must be an array");
        std::vector<DcId> row;
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            const std::string cw = where + ".clusters[" + std::to_string(c) + "]";
            const json& dc = field(clusters[c], "dc", cw);
            if (!dc.is_number_unsigned()) throw ValidationError(cw + ": dc must be a non-negative integer");
            const json& members = field(clusters[c], "members", cw);
            if (!members.is_array()) throw ValidationError(cw + ": members must be an array");
            std::vector<std::string> names;
            for (const auto& m : members) {
                if (!m.is_string()) throw ValidationError(cw + ": member IDs must be strings");
                names.push_back(m.get<std::string>());
            }
            in.clusters.push_back(std::move(names));
            row.push_back(dc.get<DcId>());
        }
        inputs.push_back(std::move(in));
        labels.push_back(std::move(row));
    }
    TrackedResult out;
    out.sequence = ClusteringSequence::build(inputs);
    out.clustering = DynamicClustering::from_labels(out.sequence, std::move(labels),
                                                    history.get<std::size_t>());
    return out;
}

std::string events_to_json(const std::vector<LifecycleEvent>& events, std::size_t history) {
    json list = json::array();
    for (const auto& e : events) {
        json item{{"kind", std::string(to_string(e.kind))}, {"time", e.time}, {"dc", e.dc}};
        if (!e.related.empty()) item["related"] = e.related;
        if (e.kind == EventKind::growth || e.kind == EventKind::shrinkage) item["delta"] = e.delta;
        list.push_back(std::move(item));
    }
    json doc{{"schema", result_schema}, {"history", history}, {"events", std::move(list)}};
    return doc.dump(2) + "\n";
}

}  // namespace dynatrack
