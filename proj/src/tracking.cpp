#include "dynatrack/tracking.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dynatrack {

namespace {

ClusterSet set_union(const ClusterSet& a, const ClusterSet& b) {
    ClusterSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

ClusterSet set_intersection(const ClusterSet& a, const ClusterSet& b) {
    ClusterSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

ClusterSet set_difference(const ClusterSet& a, const ClusterSet& b) {
    ClusterSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_subset(const ClusterSet& sub, const ClusterSet& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

// Recursive application of a relation: union of rel^1 .. rel^depth of `start`.
ClusterSet tree(const MajorityRelations& rels, Relation rel, ClusterSet start, std::size_t depth) {
    ClusterSet out;
    for (std::size_t k = 0; k < depth && !start.empty(); ++k) {
        start = lift(rels, rel, start);
        out = set_union(out, start);
    }
    return out;
}

// Levels L_0 = {g}, L_k = ts(L_{k-1}) of the tracing flow, extended while a
// level exists, the horizon allows it, and the mapping path of the new
// level lands inside the flow (nonempty subset of L_{k-m} for some m).
std::vector<ClusterSet> tracing_flow_levels(const MajorityRelations& rels, ClusterRef g,
                                            std::size_t max_depth) {
    std::vector<ClusterSet> levels{ClusterSet{g}};
    for (std::size_t k = 1; k <= max_depth; ++k) {
        ClusterSet next = lift(rels, Relation::tracing, levels[k - 1]);
        if (next.empty()) break;
        bool admitted = false;
        ClusterSet forward = next;
        for (std::size_t m = 1; m <= k; ++m) {
            forward = lift(rels, Relation::mapping, forward);
            if (forward.empty()) break;
            if (is_subset(forward, levels[k - m])) {
                admitted = true;
                break;
            }
        }
        if (!admitted) break;
        levels.push_back(std::move(next));
    }
    return levels;
}

}  // namespace

ClusterSet tracing_path(const MajorityRelations& rels, ClusterRef g, std::size_t n) {
    if (n > g.time) {
        throw std::out_of_range("tracing_path: depth " + std::to_string(n) +
                                " exceeds snapshot index " + std::to_string(g.time));
    }
    ClusterSet s{g};
    for (std::size_t k = 0; k < n && !s.empty(); ++k) s = lift(rels, Relation::tracing, s);
    return s;
}

ClusterSet mapping_path(const MajorityRelations& rels, const ClusterSet& s, std::size_t n) {
    const std::size_t T = rels.sequence().size();
    for (const auto& g : s) {
        if (g.time + n >= T) {
            throw std::out_of_range("mapping_path: depth " + std::to_string(n) +
                                    " leaves the sequence");
        }
    }
    ClusterSet out = s;
    for (std::size_t k = 0; k < n && !out.empty(); ++k) out = lift(rels, Relation::mapping, out);
    return out;
}

bool is_bijective_match(const MajorityRelations& rels, ClusterRef g, std::size_t n) {
    const ClusterSet back = tracing_path(rels, g, n);
    if (back.empty()) return false;
    return mapping_path(rels, back, n) == ClusterSet{g};
}

TrackingState::TrackingState(const ClusteringSequence& seq, std::size_t history)
    : history_(history) {
    labels_.resize(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) labels_[t].assign(seq.cluster_count(t), unlabeled);
}

bool TrackingState::is_labeled(ClusterRef ref) const {
    return labels_.at(ref.time).at(ref.cluster) != unlabeled;
}

DcId TrackingState::label(ClusterRef ref) const {
    const DcId id = labels_.at(ref.time).at(ref.cluster);
    if (id == unlabeled) {
        throw std::logic_error("cluster (" + std::to_string(ref.time) + "," +
                               std::to_string(ref.cluster) + ") has no DC label");
    }
    return id;
}

void TrackingState::assign(ClusterRef ref, DcId dc) {
    DcId& slot = labels_.at(ref.time).at(ref.cluster);
    if (slot == dc) return;
    if (slot != unlabeled) {
        auto it = registry_.find(slot);
        auto& members = it->second;
        members.erase(std::lower_bound(members.begin(), members.end(), ref));
        if (members.empty()) registry_.erase(it);
    }
    slot = dc;
    auto& members = registry_[dc];
    members.insert(std::lower_bound(members.begin(), members.end(), ref), ref);
}

SourceSet find_source_set(const TrackingState& state, const MajorityRelations& rels,
                          ClusterRef g) {
    const std::size_t max_depth = std::min(g.time, state.history());
    const auto levels = tracing_flow_levels(rels, g, max_depth);
    for (std::size_t k = levels.size() - 1; k >= 1; --k) {
        if (mapping_path(rels, levels[k], k) != ClusterSet{g}) continue;
        const DcId first = state.label(levels[k].front());
        const bool single_dc = std::all_of(levels[k].begin(), levels[k].end(),
                                           [&](ClusterRef c) { return state.label(c) == first; });
        if (single_dc) return {k, levels[k]};
    }
    return {0, ClusterSet{g}};
}

IdentityFlowResult identity_flow(const MajorityRelations& rels, ClusterRef g,
                                 const SourceSet& source) {
    IdentityFlowResult r;
    r.target = g;
    r.depth = source.depth;
    r.source_set = source.clusters;

    ClusterSet back{g};
    ClusterSet forward = source.clusters;
    r.flow = set_union(back, forward);
    for (std::size_t k = 1; k <= source.depth; ++k) {
        back = lift(rels, Relation::tracing, back);
        forward = lift(rels, Relation::mapping, forward);
        r.flow = set_union(r.flow, set_union(back, forward));
    }
    if (source.depth >= 2) {
        const ClusterSet mapper_tree = tree(rels, Relation::mapper, ClusterSet{g}, source.depth);
        const ClusterSet tracer_tree = tree(rels, Relation::tracer, source.clusters, source.depth);
        r.marginals = set_difference(set_intersection(mapper_tree, tracer_tree), r.flow);
    }
    return r;
}

std::vector<IdentityFlowResult> process_snapshot(TrackingState& state,
                                                 const MajorityRelations& rels, std::size_t t,
                                                 std::span<const std::size_t> order) {
    const auto frontier = state.frontier();
    const bool in_sequence = frontier ? (*frontier + 1 == t) : (t == 0);
    if (!in_sequence) {
        throw std::logic_error("process_snapshot: snapshot " + std::to_string(t) +
                               " does not follow the frontier");
    }
    const std::size_t m = rels.sequence().cluster_count(t);
    std::vector<std::size_t> ascending;
    if (order.empty()) {
        ascending.resize(m);
        std::iota(ascending.begin(), ascending.end(), std::size_t{0});
        order = ascending;
    } else if (order.size() != m) {
        throw std::invalid_argument("process_snapshot: order is not a permutation");
    }

    // Every target is evaluated against the labels as they stand before this
    // snapshot; corrections are applied afterwards.
    std::vector<IdentityFlowResult> results;
    results.reserve(m);
    for (std::size_t c : order) {
        const ClusterRef g{t, c};
        results.push_back(identity_flow(rels, g, find_source_set(state, rels, g)));
    }

    // Fresh DCs are numbered by cluster index, whatever the processing order.
    std::vector<DcId> target_dc(m);
    std::vector<const IdentityFlowResult*> by_cluster(m);
    for (const auto& r : results) by_cluster[r.target.cluster] = &r;
    if (std::find(by_cluster.begin(), by_cluster.end(), nullptr) != by_cluster.end()) {
        throw std::invalid_argument("process_snapshot: order is not a permutation");
    }
    for (std::size_t c = 0; c < m; ++c) {
        const auto& r = *by_cluster[c];
        target_dc[c] = r.depth == 0 ? state.allocate_dc() : state.label(r.source_set.front());
    }

    // A cluster claimed for different DCs by different targets keeps its label.
    std::map<ClusterRef, std::optional<DcId>> claims;
    for (const auto& r : results) {
        const DcId dc = target_dc[r.target.cluster];
        auto claim = [&](ClusterRef ref) {
            auto [it, inserted] = claims.try_emplace(ref, dc);
            if (!inserted && it->second != dc) it->second.reset();
        };
        for (const auto& ref : r.flow) claim(ref);
        for (const auto& ref : r.marginals) claim(ref);
    }
    for (const auto& [ref, dc] : claims) {
        if (dc) state.assign(ref, *dc);
    }
    state.advance_frontier(t);

    // The newest snapshot must map one-to-one onto DCs.
    std::vector<DcId> current = state.labels()[t];
    std::sort(current.begin(), current.end());
    if (std::adjacent_find(current.begin(), current.end()) != current.end()) {
        throw std::logic_error("structural consistency violated at snapshot " + std::to_string(t));
    }
    return results;
}

DynamicClustering track(const ClusteringSequence& seq, std::size_t history, TrackTrace* trace) {
    const MajorityRelations rels(seq);
    TrackingState state(seq, history);
    for (std::size_t t = 0; t < seq.size(); ++t) {
        auto results = process_snapshot(state, rels, t);
        if (trace) trace->snapshots.push_back(std::move(results));
    }
    return DynamicClustering::from_labels(seq, state.labels(), history);
}

}  // namespace dynatrack
