#pragma once
// Final association of every cluster to a dynamic cluster (DC).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dynatrack/snapshot_model.hpp"

namespace dynatrack {

using DcId = std::uint64_t;

struct DynamicCluster {
    DcId id = 0;
    /// Snapshot indices where the DC owns at least one cluster (strictly increasing).
    std::vector<std::size_t> presence;
    /// Clusters of the DC, one entry per presence index.
    std::vector<ClusterSet> clusters;
    /// Sorted member IDs, one entry per presence index (union over the clusters).
    std::vector<std::vector<MemberId>> members;

    std::size_t lifespan() const { return presence.size(); }
};

class DynamicClustering {
public:
    DynamicClustering() = default;

    /// `labels[t][c]` is the DC id of cluster (t, c).
    static DynamicClustering from_labels(const ClusteringSequence& seq,
                                         std::vector<std::vector<DcId>> labels,
                                         std::size_t history);

    DcId label(ClusterRef ref) const { return labels_.at(ref.time).at(ref.cluster); }
    const std::vector<std::vector<DcId>>& labels() const { return labels_; }

    /// DCs ordered by id.
    const std::vector<DynamicCluster>& dcs() const { return dcs_; }
    const DynamicCluster* find(DcId id) const;

    std::size_t history() const { return history_; }

    /// Same partition with ids renumbered 0,1,... by first appearance
    /// (snapshot order, then cluster order).
    DynamicClustering canonical(const ClusteringSequence& seq) const;

private:
    std::vector<std::vector<DcId>> labels_;
    std::vector<DynamicCluster> dcs_;
    std::size_t history_ = 0;
};

/// Labels renumbered by first appearance; equal results mean equal
/// partitions up to DC-id renaming.
std::vector<std::vector<DcId>> canonical_labels(const std::vector<std::vector<DcId>>& labels);

}  // namespace dynatrack
