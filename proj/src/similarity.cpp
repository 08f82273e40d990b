#include "dynatrack/similarity.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <stdexcept>

namespace dynatrack {

namespace {

std::size_t intersection_size(std::span<const MemberId> a, std::span<const MemberId> b) {
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

void sort_unique(ClusterSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

}  // namespace

std::optional<double> fim(std::span<const MemberId> a, std::span<const MemberId> b,
                          std::span<const MemberId> residents, FimKind kind) {
    std::vector<MemberId> a_res, b_res;
    std::set_intersection(a.begin(), a.end(), residents.begin(), residents.end(),
                          std::back_inserter(a_res));
    std::set_intersection(b.begin(), b.end(), residents.begin(), residents.end(),
                          std::back_inserter(b_res));
    const std::size_t shared = intersection_size(a_res, b_res);
    std::size_t denom = 0;
    switch (kind) {
        case FimKind::symmetric: denom = a_res.size() + b_res.size() - shared; break;
        case FimKind::forward: denom = a_res.size(); break;
        case FimKind::backward: denom = b_res.size(); break;
    }
    if (denom == 0) return std::nullopt;
    return static_cast<double>(shared) / static_cast<double>(denom);
}

MajorityRelations::MajorityRelations(const ClusteringSequence& seq) : seq_(&seq) {
    const std::size_t T = seq.size();
    rel_.resize(T);
    for (std::size_t t = 0; t < T; ++t) rel_[t].resize(seq.cluster_count(t));
    overlaps_.resize(T > 0 ? T - 1 : 0);

    constexpr auto none = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> owner(seq.member_count(), none);
    std::vector<std::size_t> counts;

    for (std::size_t t = 0; t + 1 < T; ++t) {
        const std::size_t m_prev = seq.cluster_count(t);
        const std::size_t m_next = seq.cluster_count(t + 1);
        for (std::size_t a = 0; a < m_prev; ++a) {
            for (MemberId id : seq.members({t, a})) owner[id] = static_cast<std::uint32_t>(a);
        }

        // Sparse overlap counts, one row per cluster at t+1.
        auto& ov = overlaps_[t];
        counts.assign(m_prev, 0);
        std::vector<std::size_t> touched;
        for (std::size_t b = 0; b < m_next; ++b) {
            touched.clear();
            for (MemberId id : seq.members({t + 1, b})) {
                const auto a = owner[id];
                if (a == none) continue;
                if (counts[a]++ == 0) touched.push_back(a);
            }
            std::sort(touched.begin(), touched.end());
            for (std::size_t a : touched) {
                ov.push_back({a, b, counts[a]});
                counts[a] = 0;
            }
        }
        std::sort(ov.begin(), ov.end(), [](const Overlap& x, const Overlap& y) {
            return x.from != y.from ? x.from < y.from : x.to < y.to;
        });

        for (std::size_t a = 0; a < m_prev; ++a) {
            for (MemberId id : seq.members({t, a})) owner[id] = none;
        }

        // Argmax in both directions.
        std::vector<std::size_t> best_fwd(m_prev, 0), best_bwd(m_next, 0);
        for (const auto& o : ov) {
            best_fwd[o.from] = std::max(best_fwd[o.from], o.count);
            best_bwd[o.to] = std::max(best_bwd[o.to], o.count);
        }
        for (const auto& o : ov) {
            if (o.count == best_fwd[o.from]) rel_[t][o.from].mapping.push_back({t + 1, o.to});
            if (o.count == best_bwd[o.to]) rel_[t + 1][o.to].tracing.push_back({t, o.from});
        }
        for (std::size_t b = 0; b < m_next; ++b) {
            auto& ts = rel_[t + 1][b].tracing;
            sort_unique(ts);
            if (ts.size() == 1) rel_[t][ts.front().cluster].tracer.push_back({t + 1, b});
        }
        for (std::size_t a = 0; a < m_prev; ++a) {
            auto& ms = rel_[t][a].mapping;
            sort_unique(ms);
            if (ms.size() == 1) rel_[t + 1][ms.front().cluster].mapper.push_back({t, a});
        }
        for (std::size_t a = 0; a < m_prev; ++a) sort_unique(rel_[t][a].tracer);
        for (std::size_t b = 0; b < m_next; ++b) sort_unique(rel_[t + 1][b].mapper);
    }
}

const MajorityRelations::PerCluster& MajorityRelations::at(ClusterRef g) const {
    if (g.time >= rel_.size() || g.cluster >= rel_[g.time].size()) {
        throw std::out_of_range("cluster reference out of range");
    }
    return rel_[g.time][g.cluster];
}

const ClusterSet& MajorityRelations::mapping_set(ClusterRef g) const {
    const auto& r = at(g);
    if (g.time + 1 >= rel_.size()) throw std::out_of_range("mapping_set: no later snapshot");
    return r.mapping;
}

const ClusterSet& MajorityRelations::tracing_set(ClusterRef g) const {
    const auto& r = at(g);
    if (g.time == 0) throw std::out_of_range("tracing_set: no earlier snapshot");
    return r.tracing;
}

const ClusterSet& MajorityRelations::tracer_set(ClusterRef g) const { return at(g).tracer; }

const ClusterSet& MajorityRelations::mapper_set(ClusterRef g) const { return at(g).mapper; }

const ClusterSet& MajorityRelations::apply(Relation rel, ClusterRef g) const {
    switch (rel) {
        case Relation::mapping: return mapping_set(g);
        case Relation::tracing: return tracing_set(g);
        case Relation::tracer: return tracer_set(g);
        case Relation::mapper: return mapper_set(g);
    }
    throw std::invalid_argument("unknown relation");
}

ClusterSet lift(const MajorityRelations& rels, Relation rel, const ClusterSet& s) {
    if (s.size() == 1) return rels.apply(rel, s.front());
    ClusterSet out;
    for (const auto& g : s) {
        const auto& r = rels.apply(rel, g);
        out.insert(out.end(), r.begin(), r.end());
    }
    sort_unique(out);
    return out;
}

}  // namespace dynatrack
