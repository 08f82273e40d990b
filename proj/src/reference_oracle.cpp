#include "dynatrack/reference_oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>

namespace dynatrack {

namespace {

using Ref = std::pair<std::size_t, std::size_t>;
using RefSet = std::set<Ref>;
using NameSet = std::set<std::string>;

class Naive {
public:
    explicit Naive(const ClusteringSequence& seq) {
        for (const auto& snap : seq.to_input()) {
            std::vector<NameSet> row;
            for (const auto& c : snap.clusters) row.emplace_back(c.begin(), c.end());
            clusters_.push_back(std::move(row));
        }
    }

    std::size_t snapshots() const { return clusters_.size(); }
    std::size_t count(std::size_t t) const { return clusters_[t].size(); }

    std::size_t shared(Ref a, Ref b) const {
        const auto& x = clusters_[a.first][a.second];
        const auto& y = clusters_[b.first][b.second];
        std::size_t n = 0;
        for (const auto& name : x) n += y.count(name);
        return n;
    }

    // Clusters at time `other` holding the largest non-zero share of `g`.
    RefSet majority(Ref g, std::size_t other) const {
        std::size_t best = 0;
        for (std::size_t c = 0; c < count(other); ++c) best = std::max(best, shared(g, {other, c}));
        RefSet out;
        if (best == 0) return out;
        for (std::size_t c = 0; c < count(other); ++c) {
            if (shared(g, {other, c}) == best) out.insert({other, c});
        }
        return out;
    }

    RefSet ts(Ref g) const { return g.first == 0 ? RefSet{} : majority(g, g.first - 1); }
    RefSet ms(Ref g) const { return g.first + 1 >= snapshots() ? RefSet{} : majority(g, g.first + 1); }

    RefSet tracer(Ref g) const {
        RefSet out;
        if (g.first + 1 >= snapshots()) return out;
        for (std::size_t c = 0; c < count(g.first + 1); ++c) {
            if (ts({g.first + 1, c}) == RefSet{g}) out.insert({g.first + 1, c});
        }
        return out;
    }

    RefSet mapper(Ref g) const {
        RefSet out;
        if (g.first == 0) return out;
        for (std::size_t c = 0; c < count(g.first - 1); ++c) {
            if (ms({g.first - 1, c}) == RefSet{g}) out.insert({g.first - 1, c});
        }
        return out;
    }

private:
    std::vector<std::vector<NameSet>> clusters_;
};

using Rel = RefSet (Naive::*)(Ref) const;

RefSet apply(const Naive& nv, Rel rel, const RefSet& s) {
    RefSet out;
    for (const auto& g : s) {
        auto r = (nv.*rel)(g);
        out.insert(r.begin(), r.end());
    }
    return out;
}

RefSet power(const Naive& nv, Rel rel, const RefSet& s, std::size_t n) {
    if (n == 0) return s;
    return apply(nv, rel, power(nv, rel, s, n - 1));
}

bool subset(const RefSet& a, const RefSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct Record {
    Ref target;
    std::size_t depth;
    RefSet source;
    RefSet flow;
    RefSet marginal;
};

}  // namespace

OracleRun brute_force_run(const ClusteringSequence& seq, std::size_t history,
                          OracleLimits limits) {
    if (seq.size() > limits.max_snapshots || seq.total_clusters() > limits.max_clusters) {
        throw OracleRefused("oracle is limited to " + std::to_string(limits.max_snapshots) +
                            " snapshots and " + std::to_string(limits.max_clusters) +
                            " clusters");
    }
    const Naive nv(seq);
    std::vector<std::vector<DcId>> labels(seq.size());
    std::vector<Record> records;
    DcId next = 0;

    for (std::size_t t = 0; t < seq.size(); ++t) {
        labels[t].assign(seq.cluster_count(t), ~DcId{0});
        std::vector<Record> pending;
        for (std::size_t c = 0; c < seq.cluster_count(t); ++c) {
            const Ref g{t, c};
            const RefSet self{g};
            const std::size_t max_depth = std::min(t, history);

            std::size_t reach = 0;
            for (std::size_t k = 1; k <= max_depth; ++k) {
                const RefSet level = power(nv, &Naive::ts, self, k);
                if (level.empty()) break;
                bool admitted = false;
                for (std::size_t m = 1; m <= k && !admitted; ++m) {
                    const RefSet fwd = power(nv, &Naive::ms, level, m);
                    admitted = !fwd.empty() && subset(fwd, power(nv, &Naive::ts, self, k - m));
                }
                if (!admitted) break;
                reach = k;
            }

            std::size_t depth = 0;
            for (std::size_t k = reach; k >= 1 && depth == 0; --k) {
                const RefSet candidate = power(nv, &Naive::ts, self, k);
                if (power(nv, &Naive::ms, candidate, k) != self) continue;
                std::set<DcId> owners;
                for (const auto& r : candidate) owners.insert(labels[r.first][r.second]);
                if (owners.size() == 1) depth = k;
            }

            const RefSet source = power(nv, &Naive::ts, self, depth);
            RefSet flow;
            for (std::size_t k = 0; k <= depth; ++k) {
                auto a = power(nv, &Naive::ts, self, k);
                auto b = power(nv, &Naive::ms, source, k);
                flow.insert(a.begin(), a.end());
                flow.insert(b.begin(), b.end());
            }
            RefSet mapper_tree, tracer_tree, marginal;
            for (std::size_t k = 1; k <= depth; ++k) {
                auto a = power(nv, &Naive::mapper, self, k);
                auto b = power(nv, &Naive::tracer, source, k);
                mapper_tree.insert(a.begin(), a.end());
                tracer_tree.insert(b.begin(), b.end());
            }
            for (const auto& r : mapper_tree) {
                if (tracer_tree.count(r) && !flow.count(r)) marginal.insert(r);
            }

            Record rec{g, depth, source, flow, marginal};
            pending.push_back(std::move(rec));
        }

        // Apply all targets of this snapshot at once; contested clusters keep
        // their previous label.
        std::map<Ref, std::set<DcId>> claims;
        std::vector<DcId> owner(seq.cluster_count(t));
        for (auto& rec : pending) {
            const Ref& src = *rec.source.begin();
            owner[rec.target.second] = rec.depth == 0 ? next++ : labels[src.first][src.second];
        }
        for (auto& rec : pending) {
            for (const auto& r : rec.flow) claims[r].insert(owner[rec.target.second]);
            for (const auto& r : rec.marginal) claims[r].insert(owner[rec.target.second]);
        }
        for (const auto& [r, dcs] : claims) {
            if (dcs.size() == 1) labels[r.first][r.second] = *dcs.begin();
        }
        for (auto& rec : pending) records.push_back(std::move(rec));
    }

    // Connectivity of each DC under the recorded associations.
    std::map<Ref, std::size_t> index;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        for (std::size_t c = 0; c < seq.cluster_count(t); ++c) index.emplace(Ref{t, c}, index.size());
    }
    std::vector<std::size_t> parent(index.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
        return parent[v] == v ? v : parent[v] = root(parent[v]);
    };
    for (const auto& rec : records) {
        const DcId owner = labels[rec.target.first][rec.target.second];
        for (const RefSet* part : {&rec.source, &rec.flow, &rec.marginal}) {
            for (const auto& r : *part) {
                if (labels[r.first][r.second] == owner) {
                    parent[root(index[r])] = root(index[rec.target]);
                }
            }
        }
    }
    std::map<DcId, std::set<std::size_t>> components;
    for (const auto& [r, i] : index) components[labels[r.first][r.second]].insert(root(i));

    OracleRun run;
    for (const auto& [dc, roots] : components) {
        if (roots.size() > 1) run.non_minimal.push_back(dc);
    }
    run.result = DynamicClustering::from_labels(seq, std::move(labels), history);
    return run;
}

DynamicClustering brute_force_track(const ClusteringSequence& seq, std::size_t history,
                                    OracleLimits limits) {
    return brute_force_run(seq, history, limits).result;
}

}  // namespace dynatrack
