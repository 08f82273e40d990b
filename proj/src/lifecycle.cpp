#include "dynatrack/lifecycle.hpp"

#include <algorithm>
#include <iterator>
#include <set>
#include <tuple>

namespace dynatrack {

namespace {

constexpr DcId absent = ~DcId{0};

std::size_t shared_count(const std::vector<MemberId>& a, const std::vector<MemberId>& b) {
    std::size_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

// owner[t][member] = DC holding the member at t, or `absent`.
std::vector<std::vector<DcId>> member_owners(const DynamicClustering& dcs,
                                             const ClusteringSequence& seq) {
    std::vector<std::vector<DcId>> owner(seq.size(), std::vector<DcId>(seq.member_count(), absent));
    for (std::size_t t = 0; t < seq.size(); ++t) {
        for (std::size_t c = 0; c < seq.cluster_count(t); ++c) {
            const DcId id = dcs.label({t, c});
            for (MemberId m : seq.members({t, c})) owner[t][m] = id;
        }
    }
    return owner;
}

}  // namespace

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::birth: return "birth";
        case EventKind::death: return "death";
        case EventKind::growth: return "growth";
        case EventKind::shrinkage: return "shrinkage";
        case EventKind::split: return "split";
        case EventKind::merge: return "merge";
    }
    return "unknown";
}

std::vector<LifecycleEvent> classify_events(const DynamicClustering& dcs,
                                            const ClusteringSequence& seq) {
    const auto owner = member_owners(dcs, seq);
    const std::size_t T = seq.size();
    std::vector<LifecycleEvent> events;

    for (const auto& dc : dcs.dcs()) {
        const auto& when = dc.presence;
        for (std::size_t j = 0; j < when.size(); ++j) {
            const std::size_t i = when[j];
            const auto& members = dc.members[j];

            if (j == 0) {
                const bool fresh = i == 0 || std::none_of(members.begin(), members.end(), [&](MemberId m) {
                                       return owner[i - 1][m] != absent;
                                   });
                if (fresh) events.push_back({EventKind::birth, i, dc.id, {}, 0});
            }
            if (j + 1 == when.size() && i + 1 < T) {
                const bool gone = std::none_of(members.begin(), members.end(), [&](MemberId m) {
                    return owner[i + 1][m] != absent;
                });
                if (gone) events.push_back({EventKind::death, i + 1, dc.id, {}, 0});
            }
            if (j + 1 < when.size() && when[j + 1] == i + 1) {
                const auto delta = static_cast<std::int64_t>(dc.members[j + 1].size()) -
                                   static_cast<std::int64_t>(members.size());
                if (delta > 0) events.push_back({EventKind::growth, i + 1, dc.id, {}, delta});
                if (delta < 0) events.push_back({EventKind::shrinkage, i + 1, dc.id, {}, delta});
            }
            if (i + 1 < T) {
                std::set<DcId> receivers;
                for (MemberId m : members) {
                    if (owner[i + 1][m] != absent) receivers.insert(owner[i + 1][m]);
                }
                if (receivers.size() >= 2) {
                    receivers.erase(dc.id);
                    events.push_back({EventKind::split, i + 1, dc.id,
                                      {receivers.begin(), receivers.end()}, 0});
                }
            }
            if (i > 0) {
                std::set<DcId> contributors;
                for (MemberId m : members) {
                    if (owner[i - 1][m] != absent) contributors.insert(owner[i - 1][m]);
                }
                if (contributors.size() >= 2) {
                    contributors.erase(dc.id);
                    events.push_back({EventKind::merge, i, dc.id,
                                      {contributors.begin(), contributors.end()}, 0});
                }
            }
        }
    }
    std::sort(events.begin(), events.end(), [](const LifecycleEvent& a, const LifecycleEvent& b) {
        return std::tie(a.time, a.kind, a.dc) < std::tie(b.time, b.kind, b.dc);
    });
    return events;
}

std::optional<double> autocorrelation(const DynamicCluster& dc, std::size_t j) {
    if (j + 1 >= dc.presence.size() || dc.presence[j + 1] != dc.presence[j] + 1) return std::nullopt;
    const auto& a = dc.members[j];
    const auto& b = dc.members[j + 1];
    const std::size_t shared = shared_count(a, b);
    const std::size_t total = a.size() + b.size() - shared;
    if (total == 0) return std::nullopt;
    return static_cast<double>(shared) / static_cast<double>(total);
}

std::optional<double> total_consistency(const DynamicClustering& dcs,
                                        const ClusteringSequence& seq, ConsistencyMode mode) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (const auto& dc : dcs.dcs()) {
        for (std::size_t j = 0; j + 1 < dc.presence.size(); ++j) {
            const std::size_t i = dc.presence[j];
            if (dc.presence[j + 1] != i + 1) continue;
            ++pairs;
            const auto& a = dc.members[j];
            const auto& b = dc.members[j + 1];
            const std::size_t shared = shared_count(a, b);
            std::size_t total = a.size() + b.size() - shared;
            if (mode == ConsistencyMode::residents_only) {
                const auto res = residents(seq, i, i + 1);
                total = shared_count(a, res) + shared_count(b, res) - shared;
            }
            // A pair without resident members contributes zero.
            if (total > 0) sum += static_cast<double>(shared) / static_cast<double>(total);
        }
    }
    if (pairs == 0) return std::nullopt;
    return sum / static_cast<double>(pairs);
}

SummaryStats summary_stats(const DynamicClustering& dcs) {
    SummaryStats s;
    s.dc_count = dcs.dcs().size();
    double span_sum = 0.0, weighted = 0.0, weights = 0.0;
    for (const auto& dc : dcs.dcs()) {
        const auto life = dc.lifespan();
        ++s.lifespan_histogram[life];
        span_sum += static_cast<double>(life);
        double w = 0.0;
        for (const auto& m : dc.members) w += static_cast<double>(m.size());
        weighted += w * static_cast<double>(life);
        weights += w;
    }
    if (s.dc_count > 0) s.mean_lifespan = span_sum / static_cast<double>(s.dc_count);
    if (weights > 0) s.weighted_mean_lifespan = weighted / weights;
    return s;
}

}  // namespace dynatrack
