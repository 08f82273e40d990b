#include "dynatrack/dynamic_clustering.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace dynatrack {

DynamicClustering DynamicClustering::from_labels(const ClusteringSequence& seq,
                                                 std::vector<std::vector<DcId>> labels,
                                                 std::size_t history) {
    if (labels.size() != seq.size()) {
        throw ValidationError("label table has " + std::to_string(labels.size()) +
                              " snapshots, sequence has " + std::to_string(seq.size()));
    }
    DynamicClustering out;
    out.history_ = history;
    std::map<DcId, DynamicCluster> by_id;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        if (labels[t].size() != seq.cluster_count(t)) {
            throw ValidationError("snapshot " + std::to_string(t) + ": label count mismatch");
        }
        for (std::size_t c = 0; c < labels[t].size(); ++c) {
            auto& dc = by_id[labels[t][c]];
            dc.id = labels[t][c];
            if (dc.presence.empty() || dc.presence.back() != t) {
                dc.presence.push_back(t);
                dc.clusters.emplace_back();
                dc.members.emplace_back();
            }
            dc.clusters.back().push_back({t, c});
            auto m = seq.members({t, c});
            dc.members.back().insert(dc.members.back().end(), m.begin(), m.end());
        }
    }
    for (auto& [id, dc] : by_id) {
        for (auto& m : dc.members) std::sort(m.begin(), m.end());
        out.dcs_.push_back(std::move(dc));
    }
    out.labels_ = std::move(labels);
    return out;
}

const DynamicCluster* DynamicClustering::find(DcId id) const {
    auto it = std::lower_bound(dcs_.begin(), dcs_.end(), id,
                               [](const DynamicCluster& d, DcId v) { return d.id < v; });
    return (it != dcs_.end() && it->id == id) ? &*it : nullptr;
}

DynamicClustering DynamicClustering::canonical(const ClusteringSequence& seq) const {
    return from_labels(seq, canonical_labels(labels_), history_);
}

std::vector<std::vector<DcId>> canonical_labels(const std::vector<std::vector<DcId>>& labels) {
    std::unordered_map<DcId, DcId> rename;
    auto out = labels;
    for (auto& row : out) {
        for (auto& id : row) {
            auto [it, inserted] = rename.try_emplace(id, rename.size());
            id = it->second;
        }
    }
    return out;
}

}  // namespace dynatrack
