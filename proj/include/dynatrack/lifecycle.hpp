#pragma once
// Life-cycle events and consistency scores of a dynamic clustering.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "dynatrack/dynamic_clustering.hpp"
#include "dynatrack/snapshot_model.hpp"

namespace dynatrack {

enum class EventKind { birth, death, growth, shrinkage, split, merge };

std::string_view to_string(EventKind kind);

struct LifecycleEvent {
    EventKind kind = EventKind::birth;
    std::size_t time = 0;
    DcId dc = 0;
    /// Other DCs involved in a split (receivers) or merge (contributors).
    std::vector<DcId> related;
    /// Member-count change for growth/shrinkage.
    std::int64_t delta = 0;

    friend bool operator==(const LifecycleEvent&, const LifecycleEvent&) = default;
};

/// Events in (time, kind, dc) order:
///   birth at i+1   first presence, and no member was present at i (always at 0);
///   death at i+1   last presence at i < T-1, and no member is present at i+1;
///   growth / shrinkage at i+1 for presence at both i and i+1;
///   split at i+1   members of c_i end up in clusters of two or more DCs;
///   merge at i+1   members of c_{i+1} came from clusters of two or more DCs.
std::vector<LifecycleEvent> classify_events(const DynamicClustering& dcs,
                                            const ClusteringSequence& seq);

/// Jaccard index of the member sets at presence indices j and j+1. nullopt
/// unless the two presences are adjacent snapshots.
std::optional<double> autocorrelation(const DynamicCluster& dc, std::size_t j);

enum class ConsistencyMode { all_members, residents_only };

/// Average auto-correlation over every adjacent-snapshot presence pair of
/// every DC; nullopt when there is no such pair. In residents_only mode the
/// union of each pair only counts members present in both snapshots.
std::optional<double> total_consistency(const DynamicClustering& dcs,
                                        const ClusteringSequence& seq, ConsistencyMode mode);

struct SummaryStats {
    std::size_t dc_count = 0;
    /// lifespan (snapshots present) -> number of DCs
    std::map<std::size_t, std::size_t> lifespan_histogram;
    std::optional<double> mean_lifespan;
    /// Lifespans weighted by member-snapshot count: the lifespan of the DC
    /// an average member belongs to.
    std::optional<double> weighted_mean_lifespan;
};

SummaryStats summary_stats(const DynamicClustering& dcs);

}  // namespace dynatrack
