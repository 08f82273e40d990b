#pragma once
// Majority relations between neighbouring snapshots.
//
// For a cluster g at time i the mapping set is the set of clusters at i+1
// sharing the largest (non-zero) number of members with g; the tracing set
// is the same thing looking back to i-1. Tracer and mapper sets are the
// inverse relations restricted to singleton tracing/mapping sets. All
// argmax decisions use exact integer overlap counts so ties are exact.
//
// Only members present in both snapshots can be shared, so the relations
// are unaffected by members entering or leaving the system.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dynatrack/snapshot_model.hpp"

namespace dynatrack {

enum class FimKind { symmetric, forward, backward };

/// Fraction of identical members between sorted member lists `a` and `b`,
/// with denominators restricted to `residents` (also sorted). Returns
/// nullopt when the denominator is empty.
std::optional<double> fim(std::span<const MemberId> a, std::span<const MemberId> b,
                          std::span<const MemberId> residents, FimKind kind);

enum class Relation { mapping, tracing, tracer, mapper };

/// Non-zero overlap between cluster `from` at time t and `to` at time t+1.
struct Overlap {
    std::size_t from = 0;
    std::size_t to = 0;
    std::size_t count = 0;
};

class MajorityRelations {
public:
    /// Computes the relations for every neighbouring pair once.
    explicit MajorityRelations(const ClusteringSequence& seq);

    const ClusteringSequence& sequence() const { return *seq_; }

    /// Clusters at t+1; throws std::out_of_range for the last snapshot.
    const ClusterSet& mapping_set(ClusterRef g) const;
    /// Clusters at t-1; throws std::out_of_range for the first snapshot.
    const ClusterSet& tracing_set(ClusterRef g) const;
    /// Clusters h at t+1 with tracing_set(h) == {g}; empty at the last snapshot.
    const ClusterSet& tracer_set(ClusterRef g) const;
    /// Clusters h at t-1 with mapping_set(h) == {g}; empty at the first snapshot.
    const ClusterSet& mapper_set(ClusterRef g) const;

    const ClusterSet& apply(Relation rel, ClusterRef g) const;

    /// Non-zero overlaps between snapshots t and t+1, ordered by (from, to).
    const std::vector<Overlap>& overlaps(std::size_t t) const { return overlaps_.at(t); }

private:
    struct PerCluster {
        ClusterSet mapping, tracing, tracer, mapper;
    };

    const PerCluster& at(ClusterRef g) const;

    const ClusteringSequence* seq_;
    std::vector<std::vector<PerCluster>> rel_;
    std::vector<std::vector<Overlap>> overlaps_;
};

/// Union of the relation applied to each element of `s`.
ClusterSet lift(const MajorityRelations& rels, Relation rel, const ClusterSet& s);

}  // namespace dynatrack
