#pragma once
// Progressive detection of dynamic clusters.
//
// Snapshots are processed in order. Every cluster of the current snapshot
// (the target) looks back along its tracing path for the earliest set of
// clusters that it forms a bijective majority match with and that belongs
// to a single DC (its source set). The target, every cluster on the
// tracing path of the target and on the mapping path of the source set
// (the identity flow), and every cluster embedded between the two
// (marginal clusters) are assigned to the source set's DC. Without such a
// source set the target starts a new DC.
//
// The history parameter bounds how far back a target may look, and so
// also how far back labels can be revised.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dynatrack/dynamic_clustering.hpp"
#include "dynatrack/similarity.hpp"
#include "dynatrack/snapshot_model.hpp"

namespace dynatrack {

/// ts^n(g): the tracing set applied n times (ts^0(g) = {g}).
/// Throws std::out_of_range if n > g.time.
ClusterSet tracing_path(const MajorityRelations& rels, ClusterRef g, std::size_t n);

/// ms^n(S): the mapping set applied n times (ms^0(S) = S).
/// Throws std::out_of_range if the path would leave the sequence.
ClusterSet mapping_path(const MajorityRelations& rels, const ClusterSet& s, std::size_t n);

/// ms^n(ts^n(g)) == {g}.
bool is_bijective_match(const MajorityRelations& rels, ClusterRef g, std::size_t n);

struct SourceSet {
    std::size_t depth = 0;  // n*: distance between source set and target
    ClusterSet clusters;    // ts^depth(target)
};

struct IdentityFlowResult {
    ClusterRef target;
    std::size_t depth = 0;
    ClusterSet source_set;
    /// Tracing flow of the target united with the mapping flow of the source set.
    ClusterSet flow;
    /// Clusters in the mapper tree of the target and the tracer tree of the
    /// source set that are not part of the flow.
    ClusterSet marginals;
};

class TrackingState {
public:
    TrackingState(const ClusteringSequence& seq, std::size_t history);

    std::size_t history() const { return history_; }
    /// Last processed snapshot, if any.
    std::optional<std::size_t> frontier() const { return frontier_; }

    bool is_labeled(ClusterRef ref) const;
    /// Throws std::logic_error for a cluster that has not been labeled yet.
    DcId label(ClusterRef ref) const;

    /// DC id -> clusters currently associated with it.
    const std::map<DcId, ClusterSet>& registry() const { return registry_; }

    DcId allocate_dc() { return next_dc_++; }
    /// Associates `ref` with `dc`, moving it out of its previous DC. A DC
    /// left without clusters is dropped from the registry.
    void assign(ClusterRef ref, DcId dc);
    void advance_frontier(std::size_t t) { frontier_ = t; }

    const std::vector<std::vector<DcId>>& labels() const { return labels_; }

private:
    static constexpr DcId unlabeled = ~DcId{0};

    std::size_t history_;
    std::vector<std::vector<DcId>> labels_;
    std::map<DcId, ClusterSet> registry_;
    DcId next_dc_ = 0;
    std::optional<std::size_t> frontier_;
};

/// Deepest depth n <= min(g.time, history) reachable by the tracing flow
/// at which g forms a bijective majority match with ts^n(g) and all of
/// ts^n(g) carries one DC label; depth 0 ({g}) if there is none.
SourceSet find_source_set(const TrackingState& state, const MajorityRelations& rels,
                          ClusterRef g);

IdentityFlowResult identity_flow(const MajorityRelations& rels, ClusterRef g,
                                 const SourceSet& source);

/// Processes snapshot t (which must directly follow the frontier, or be 0
/// for a fresh state). `order` is a permutation of the cluster indices of
/// snapshot t; empty means ascending. Returns one result per target, in
/// processing order. Throws std::logic_error on a sequencing error.
std::vector<IdentityFlowResult> process_snapshot(TrackingState& state,
                                                 const MajorityRelations& rels, std::size_t t,
                                                 std::span<const std::size_t> order = {});

/// Per-snapshot results of every target, for inspection.
struct TrackTrace {
    std::vector<std::vector<IdentityFlowResult>> snapshots;
};

DynamicClustering track(const ClusteringSequence& seq, std::size_t history,
                        TrackTrace* trace = nullptr);

}  // namespace dynatrack
