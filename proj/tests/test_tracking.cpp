#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "dynatrack/reference_oracle.hpp"
#include "dynatrack/synthetic.hpp"
#include "dynatrack/tracking.hpp"
#include "support/fixtures.hpp"
#include "support/random_instances.hpp"
#include "support/set_model.hpp"

using namespace dynatrack;
using dynatrack::testing::seq_of;

namespace {

std::size_t dc_count(const DynamicClustering& dc) { return dc.dcs().size(); }

bool same_partition(const DynamicClustering& a, const DynamicClustering& b) {
    return canonical_labels(a.labels()) == canonical_labels(b.labels());
}

}  // namespace

TEST_CASE("tracing path basics") {
    const auto seq = seq_of({{{"1", "2"}}, {{"1", "2"}}, {{"1", "2"}}});
    const MajorityRelations rels(seq);
    CHECK(tracing_path(rels, {2, 0}, 0) == ClusterSet{{2, 0}});
    CHECK(tracing_path(rels, {2, 0}, 2) == ClusterSet{{0, 0}});
    CHECK_THROWS_AS(tracing_path(rels, {1, 0}, 2), std::out_of_range);
    CHECK(mapping_path(rels, {{0, 0}}, 2) == ClusterSet{{2, 0}});
    CHECK(mapping_path(rels, {{0, 0}}, 0) == ClusterSet{{0, 0}});
    CHECK_THROWS_AS(mapping_path(rels, {{1, 0}}, 2), std::out_of_range);
}

TEST_CASE("tracing path through a splinter joins again") {
    // ts(C) = {A, B}, ts(A) = ts(B) = {Z}
    const auto seq = seq_of({{{"1", "2", "3", "4"}}, {{"1", "2"}, {"3", "4"}}, {{"1", "2", "3", "4"}}});
    const MajorityRelations rels(seq);
    const testing::SetModel model(seq);
    CHECK(tracing_path(rels, {2, 0}, 1) == ClusterSet{{1, 0}, {1, 1}});
    CHECK(tracing_path(rels, {2, 0}, 2) == ClusterSet{{0, 0}});
    CHECK(tracing_path(rels, {2, 0}, 2) == model.power(&testing::SetModel::ts, {{2, 0}}, 2));
    // and the dual
    CHECK(mapping_path(rels, {{0, 0}}, 1) == ClusterSet{{1, 0}, {1, 1}});
    CHECK(mapping_path(rels, {{0, 0}}, 2) == ClusterSet{{2, 0}});
}

TEST_CASE("paths agree with path enumeration on random instances") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto seq = ClusteringSequence::build(testing::random_instance(seed));
        const MajorityRelations rels(seq);
        const testing::SetModel model(seq);
        for (std::size_t t = 0; t < seq.size(); ++t) {
            for (std::size_t c = 0; c < seq.cluster_count(t); ++c) {
                const ClusterRef g{t, c};
                for (std::size_t n = 0; n <= t; ++n) {
                    const auto back = tracing_path(rels, g, n);
                    REQUIRE(back == model.power(&testing::SetModel::ts, {g}, n));
                    const bool expected = !back.empty() &&
                                          model.power(&testing::SetModel::ms, back, n) == ClusterSet{g};
                    REQUIRE(is_bijective_match(rels, g, n) == expected);
                }
                for (std::size_t n = 0; t + n < seq.size(); ++n) {
                    REQUIRE(mapping_path(rels, {g}, n) == model.power(&testing::SetModel::ms, {g}, n));
                }
            }
        }
    }
}

TEST_CASE("bijective match at depth zero always holds") {
    const auto seq = seq_of({{{"1"}}, {{"2"}}});
    const MajorityRelations rels(seq);
    CHECK(is_bijective_match(rels, {1, 0}, 0));
    CHECK_FALSE(is_bijective_match(rels, {1, 0}, 1));
}

TEST_CASE("two groups swapping majorities") {
    // X={1,2,3}, Y={4,5,6}, then P={1,2,4}, Q={3,5,6}, then back.
    const auto seq = seq_of({{{"1", "2", "3"}, {"4", "5", "6"}},
                             {{"1", "2", "4"}, {"3", "5", "6"}},
                             {{"1", "2", "3"}, {"4", "5", "6"}}});
    const MajorityRelations rels(seq);
    const testing::SetModel model(seq);
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t n = 1; n <= 2; ++n) {
            const auto back = model.power(&testing::SetModel::ts, {{2, c}}, n);
            CHECK(is_bijective_match(rels, {2, c}, n) ==
                  (model.power(&testing::SetModel::ms, back, n) == ClusterSet{{2, c}}));
        }
        CHECK(is_bijective_match(rels, {2, c}, 2));
    }
}

TEST_CASE("first snapshot clusters start new DCs") {
    const auto seq = testing::association_sequence();
    const MajorityRelations rels(seq);
    TrackingState state(seq, 3);
    const auto results = process_snapshot(state, rels, 0);
    REQUIRE(results.size() == 3);
    std::set<DcId> ids;
    for (const auto& r : results) {
        CHECK(r.depth == 0);
        CHECK(r.flow == ClusterSet{r.target});
        CHECK(r.marginals.empty());
        ids.insert(state.label(r.target));
    }
    CHECK(ids.size() == 3);
}

TEST_CASE("source set two steps back with a marginal cluster") {
    const auto seq = testing::association_sequence();
    const MajorityRelations rels(seq);
    TrackingState state(seq, 3);
    for (std::size_t t = 0; t < 3; ++t) process_snapshot(state, rels, t);

    // S merges P and Q, which carry different DCs, so S starts a DC of its own.
    CHECK(state.label({1, 0}) != state.label({0, 0}));
    CHECK(state.label({1, 0}) != state.label({0, 1}));

    const auto source = find_source_set(state, rels, {3, 0});
    CHECK(source.depth == 2);
    CHECK(source.clusters == ClusterSet{{1, 0}});

    const auto flow = identity_flow(rels, {3, 0}, source);
    CHECK(flow.flow == ClusterSet{{1, 0}, {2, 0}, {3, 0}});
    CHECK(flow.marginals == ClusterSet{{2, 1}});

    process_snapshot(state, rels, 3);
    const DcId s = state.label({1, 0});
    CHECK(state.label({2, 0}) == s);
    CHECK(state.label({2, 1}) == s);
    CHECK(state.label({3, 0}) == s);
    // The unrelated pair keeps one DC throughout.
    for (std::size_t t = 1; t < 4; ++t) {
        CHECK(state.label({t, seq.cluster_count(t) - 1}) == state.label({0, 2}));
    }
}

TEST_CASE("a deeper match spanning two DCs falls back to the single-DC one") {
    const auto seq = testing::association_sequence();
    const MajorityRelations rels(seq);
    TrackingState state(seq, 3);
    process_snapshot(state, rels, 0);
    process_snapshot(state, rels, 1);
    // A at t2: depth 2 matches {P, Q} bijectively but they belong to two DCs.
    CHECK(is_bijective_match(rels, {2, 0}, 2));
    CHECK(tracing_path(rels, {2, 0}, 2) == ClusterSet{{0, 0}, {0, 1}});
    const auto source = find_source_set(state, rels, {2, 0});
    CHECK(source.depth == 1);
    CHECK(source.clusters == ClusterSet{{1, 0}});
}

TEST_CASE("the history bounds the depth") {
    const auto seq = testing::association_sequence();
    const MajorityRelations rels(seq);
    TrackingState state(seq, 1);
    for (std::size_t t = 0; t < 3; ++t) process_snapshot(state, rels, t);
    const auto source = find_source_set(state, rels, {3, 0});
    CHECK(source.depth == 1);
    CHECK(identity_flow(rels, {3, 0}, source).marginals.empty());
}

TEST_CASE("a one-snapshot splinter is taken back retroactively") {
    const auto seq = testing::splinter_once_sequence();
    const MajorityRelations rels(seq);
    TrackingState state(seq, 2);
    for (std::size_t t = 0; t < 4; ++t) process_snapshot(state, rels, t);
    // At t3 the splinter looks like a new DC.
    CHECK(state.label({3, 1}) != state.label({3, 0}));

    const auto results = process_snapshot(state, rels, 4);
    CHECK(results[0].depth == 2);
    CHECK(results[0].marginals == ClusterSet{{3, 1}});
    CHECK(state.label({3, 1}) == state.label({3, 0}));
    CHECK(state.registry().size() == 2);

    // One step of history cannot see past the splinter.
    CHECK(dc_count(track(seq, 1)) == 3);
    CHECK(dc_count(track(seq, 2)) == 2);
}

TEST_CASE("an unchanged snapshot inherits every label") {
    const auto seq = seq_of({{{"1", "2"}, {"3"}, {"4", "5"}}, {{"1", "2"}, {"3"}, {"4", "5"}}});
    const auto result = track(seq, 1);
    CHECK(dc_count(result) == 3);
    for (std::size_t c = 0; c < 3; ++c) CHECK(result.label({1, c}) == result.label({0, c}));
}

TEST_CASE("a snapshot of new members gets fresh DCs") {
    const auto seq = seq_of({{{"1", "2"}, {"3"}}, {{"a", "b"}, {"c"}}});
    const auto result = track(seq, 3);
    CHECK(dc_count(result) == 4);
}

TEST_CASE("one snapshot gives one DC per cluster") {
    const auto seq = seq_of({{{"1"}, {"2"}, {"3", "4"}}});
    const auto result = track(seq, 2);
    CHECK(dc_count(result) == 3);
    CHECK(same_partition(result, brute_force_track(seq, 2)));
}

TEST_CASE("sequencing errors") {
    const auto seq = testing::association_sequence();
    const MajorityRelations rels(seq);
    TrackingState state(seq, 2);
    CHECK_THROWS_AS(process_snapshot(state, rels, 1), std::logic_error);
    CHECK_THROWS_AS(state.label({0, 0}), std::logic_error);
    const std::vector<std::size_t> short_order{0, 1};
    CHECK_THROWS_AS(process_snapshot(state, rels, 0, short_order), std::invalid_argument);
    const std::vector<std::size_t> repeated{0, 0, 1};
    CHECK_THROWS_AS(process_snapshot(state, rels, 0, repeated), std::invalid_argument);
    process_snapshot(state, rels, 0);
    CHECK_THROWS_AS(process_snapshot(state, rels, 0), std::logic_error);
    CHECK_THROWS_AS(process_snapshot(state, rels, 2), std::logic_error);
}

TEST_CASE("the newest snapshot maps one-to-one onto DCs") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto seq = ClusteringSequence::build(testing::random_instance(seed));
        const MajorityRelations rels(seq);
        TrackingState state(seq, 1 + seed % 4);
        for (std::size_t t = 0; t < seq.size(); ++t) {
            process_snapshot(state, rels, t);
            std::set<DcId> seen(state.labels()[t].begin(), state.labels()[t].end());
            REQUIRE(seen.size() == seq.cluster_count(t));
        }
    }
}

TEST_CASE("processing order within a snapshot does not matter") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        const auto seq = ClusteringSequence::build(testing::random_instance(seed));
        const std::size_t x = 1 + seed % 4;
        const auto reference = canonical_labels(track(seq, x).labels());
        testing::Rng rng(seed ^ 0x5eed);
        for (int rep = 0; rep < 3; ++rep) {
            const MajorityRelations rels(seq);
            TrackingState state(seq, x);
            for (std::size_t t = 0; t < seq.size(); ++t) {
                std::vector<std::size_t> order(seq.cluster_count(t));
                std::iota(order.begin(), order.end(), std::size_t{0});
                rng.shuffle(order);
                process_snapshot(state, rels, t, order);
            }
            REQUIRE(canonical_labels(state.labels()) == reference);
        }
    }
}

TEST_CASE("track agrees with the brute-force reference") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto seq = ClusteringSequence::build(testing::random_instance(seed));
        for (std::size_t x = 1; x <= 4; ++x) {
            REQUIRE(same_partition(track(seq, x), brute_force_track(seq, x)));
        }
    }
}

TEST_CASE("a splinter of duration d needs d+1 steps of history") {
    for (std::size_t d = 1; d <= 3; ++d) {
        const auto scenario = generate(testing::splinter_spec(d));
        for (std::size_t x = 1; x <= d + 3; ++x) {
            CAPTURE(d);
            CAPTURE(x);
            const auto result = track(scenario.sequence, x);
            CHECK((dc_count(result) == 1) == (x >= d + 1));
            CHECK(same_partition(result, brute_force_track(scenario.sequence, x)));
        }
    }
}

TEST_CASE("splinter and transition scenario") {
    const auto spec = parse_scenario(testing::read_text(testing::fixture_path("splinter_transition.json")));
    const auto seq = generate(spec).sequence;
    const OracleLimits limits{10, 40};

    const auto wide = track(seq, 5);
    REQUIRE(dc_count(wide) == 1);
    CHECK(wide.dcs()[0].lifespan() == 10);
    CHECK(same_partition(wide, brute_force_track(seq, 5, limits)));

    const auto narrow = track(seq, 1);
    CHECK(dc_count(narrow) == 5);
    CHECK(same_partition(narrow, brute_force_track(seq, 1, limits)));

    const std::vector<std::size_t> pinned{5, 5, 4, 1, 1, 1};
    for (std::size_t x = 1; x <= pinned.size(); ++x) {
        CAPTURE(x);
        CHECK(dc_count(track(seq, x)) == pinned[x - 1]);
    }
}

TEST_CASE("trace records one result per target") {
    const auto seq = testing::association_sequence();
    TrackTrace trace;
    track(seq, 3, &trace);
    REQUIRE(trace.snapshots.size() == 4);
    for (std::size_t t = 0; t < 4; ++t) CHECK(trace.snapshots[t].size() == seq.cluster_count(t));
    CHECK(trace.snapshots[3][0].depth == 2);
}
