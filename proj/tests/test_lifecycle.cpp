#include <doctest.h>

#include <set>

#include "dynatrack/lifecycle.hpp"
#include "dynatrack/synthetic.hpp"
#include "dynatrack/tracking.hpp"
#include "support/fixtures.hpp"
#include "support/random_instances.hpp"

using namespace dynatrack;
using dynatrack::testing::seq_of;

namespace {

DynamicCluster dc_of(std::vector<std::size_t> presence, std::vector<std::vector<MemberId>> members) {
    DynamicCluster dc;
    dc.presence = std::move(presence);
    dc.members = std::move(members);
    dc.clusters.resize(dc.presence.size());
    return dc;
}

std::vector<LifecycleEvent> of_kind(const std::vector<LifecycleEvent>& events, EventKind kind) {
    std::vector<LifecycleEvent> out;
    for (const auto& e : events) {
        if (e.kind == kind) out.push_back(e);
    }
    return out;
}

}  // namespace

TEST_CASE("autocorrelation") {
    CHECK(*autocorrelation(dc_of({0, 1}, {{1, 2}, {1, 2}}), 0) == 1.0);
    CHECK(*autocorrelation(dc_of({0, 1}, {{1, 2}, {1, 3}}), 0) == doctest::Approx(1.0 / 3.0));
    CHECK(*autocorrelation(dc_of({0, 1}, {{1, 2}, {3, 4}}), 0) == 0.0);
    CHECK_FALSE(autocorrelation(dc_of({0, 2}, {{1, 2}, {1, 2}}), 0).has_value());
    CHECK_FALSE(autocorrelation(dc_of({0}, {{1}}), 0).has_value());
}

TEST_CASE("total consistency of one DC") {
    const auto seq = seq_of({{{"1", "2"}}, {{"1", "2"}}, {{"1", "3"}}});
    const auto dcs = DynamicClustering::from_labels(seq, {{0}, {0}, {0}}, 1);
    const auto c = total_consistency(dcs, seq, ConsistencyMode::all_members);
    REQUIRE(c.has_value());
    CHECK(std::abs(*c - 2.0 / 3.0) < 1e-12);
}

TEST_CASE("total consistency of two DCs") {
    const auto seq = seq_of({{{"1", "2"}, {"4", "5"}}, {{"1", "2"}, {"4", "5"}}, {{"1", "3"}, {"4", "5"}}});
    const auto dcs = DynamicClustering::from_labels(seq, {{0, 1}, {0, 1}, {0, 1}}, 1);
    const auto c = total_consistency(dcs, seq, ConsistencyMode::all_members);
    REQUIRE(c.has_value());
    CHECK(std::abs(*c - 5.0 / 6.0) < 1e-12);
}

TEST_CASE("total consistency is undefined without consecutive presences") {
    const auto seq = seq_of({{{"1"}}, {{"2"}}});
    const auto dcs = DynamicClustering::from_labels(seq, {{0}, {1}}, 1);
    CHECK_FALSE(total_consistency(dcs, seq, ConsistencyMode::all_members).has_value());
    CHECK_FALSE(total_consistency(dcs, seq, ConsistencyMode::residents_only).has_value());

    const auto gap = seq_of({{{"1"}}, {{"2"}}, {{"1"}}});
    const auto gapped = DynamicClustering::from_labels(gap, {{0}, {1}, {0}}, 2);
    CHECK_FALSE(total_consistency(gapped, gap, ConsistencyMode::all_members).has_value());
}

TEST_CASE("resident-only consistency ignores members entering or leaving") {
    // 2 leaves and 3 arrives; only 1 is resident.
    const auto seq = seq_of({{{"1", "2"}}, {{"1", "3"}}});
    const auto dcs = DynamicClustering::from_labels(seq, {{0}, {0}}, 1);
    CHECK(*total_consistency(dcs, seq, ConsistencyMode::all_members) == doctest::Approx(1.0 / 3.0));
    CHECK(*total_consistency(dcs, seq, ConsistencyMode::residents_only) == 1.0);

    // Nothing resident at all: the pair counts as zero.
    const auto swap = seq_of({{{"1"}}, {{"2"}}});
    const auto one = DynamicClustering::from_labels(swap, {{0}, {0}}, 1);
    CHECK(*total_consistency(one, swap, ConsistencyMode::residents_only) == 0.0);
}

TEST_CASE("consistency lies in [0, 1] and is 1 for constant membership") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto seq = ClusteringSequence::build(testing::random_instance(seed));
        const auto result = track(seq, 1 + seed % 4);
        for (auto mode : {ConsistencyMode::all_members, ConsistencyMode::residents_only}) {
            const auto c = total_consistency(result, seq, mode);
            if (c) REQUIRE((*c >= 0.0 && *c <= 1.0));
        }
    }
    ScenarioSpec spec;
    spec.snapshots = 5;
    spec.dcs = {{6, 0, 4}, {3, 1, 4}};
    const auto scenario = generate(spec);
    const auto result = track(scenario.sequence, 2);
    CHECK(*total_consistency(result, scenario.sequence, ConsistencyMode::all_members) == 1.0);
    CHECK(*total_consistency(result, scenario.sequence, ConsistencyMode::residents_only) == 1.0);
}

TEST_CASE("summary statistics") {
    const auto five = seq_of({{{"a"}}, {{"a"}}, {{"a"}}, {{"a"}}, {{"a"}}});
    const auto s = summary_stats(track(five, 1));
    CHECK(s.dc_count == 1);
    CHECK(*s.mean_lifespan == 5.0);
    CHECK(*s.weighted_mean_lifespan == 5.0);
    CHECK(s.lifespan_histogram == std::map<std::size_t, std::size_t>{{5, 1}});

    // Lifespans 1 and 3 with 10 and 1 members per snapshot.
    const std::vector<std::string> ten{"0", "1", "2", "3", "4", "5", "6", "7", "8", "9"};
    const auto mixed = seq_of({{ten, {"z"}}, {{"z"}}, {{"z"}}});
    const auto m = summary_stats(DynamicClustering::from_labels(mixed, {{0, 1}, {1}, {1}}, 1));
    CHECK(m.dc_count == 2);
    CHECK(*m.mean_lifespan == 2.0);
    CHECK(std::abs(*m.weighted_mean_lifespan - 19.0 / 13.0) < 1e-12);

    const auto empty = seq_of(std::vector<std::vector<std::vector<std::string>>>(1));
    const auto none = summary_stats(DynamicClustering::from_labels(empty, {{}}, 1));
    CHECK(none.dc_count == 0);
    CHECK(none.lifespan_histogram.empty());
    CHECK_FALSE(none.mean_lifespan.has_value());
    CHECK_FALSE(none.weighted_mean_lifespan.has_value());
}

TEST_CASE("growth and death") {
    const auto grow = seq_of({{{"a", "b"}}, {{"a", "b", "c"}}});
    const auto events = classify_events(track(grow, 1), grow);
    REQUIRE(events.size() == 2);
    CHECK(events[0].kind == EventKind::birth);
    CHECK(events[1].kind == EventKind::growth);
    CHECK(events[1].time == 1);
    CHECK(events[1].delta == 1);

    const auto shrink = seq_of({{{"a", "b", "c"}}, {{"a", "b"}}});
    const auto fewer = classify_events(track(shrink, 1), shrink);
    REQUIRE(fewer.size() == 2);
    CHECK(fewer[1].kind == EventKind::shrinkage);
    CHECK(fewer[1].delta == -1);

    const auto die = seq_of({{{"a", "b"}, {"c"}}, {{"c"}}});
    const auto result = track(die, 1);
    const auto deaths = of_kind(classify_events(result, die), EventKind::death);
    REQUIRE(deaths.size() == 1);
    CHECK(deaths[0].time == 1);
    CHECK(deaths[0].dc == result.label({0, 0}));
}

TEST_CASE("no death while members remain in the system") {
    const auto seq = seq_of({{{"a", "b", "c"}, {"x"}}, {{"a"}, {"b", "c", "x"}}});
    const auto result = track(seq, 1);
    const auto events = classify_events(result, seq);
    for (const auto& e : events) CHECK(e.kind != EventKind::death);
}

TEST_CASE("a stable sequence only has births") {
    ScenarioSpec spec;
    spec.snapshots = 6;
    spec.dcs = {{8, 0, 5}, {5, 0, 5}};
    const auto scenario = generate(spec);
    const auto events = classify_events(track(scenario.sequence, 2), scenario.sequence);
    REQUIRE(events.size() == 2);
    for (const auto& e : events) {
        CHECK(e.kind == EventKind::birth);
        CHECK(e.time == 0);
    }
}

TEST_CASE("planted split and merge show up as events") {
    ScenarioSpec spec;
    spec.snapshots = 6;
    spec.dcs = {{20, 0, 5}, {6, 0, 5}};
    spec.events = {{ScenarioEventKind::split, 0, 2, 1, 0.4, std::nullopt},
                   {ScenarioEventKind::merge, 1, 4, 1, 0.5, 0}};
    const auto scenario = generate(spec);
    const auto& seq = scenario.sequence;
    const auto result = track(seq, 2);
    const auto events = classify_events(result, seq);

    // Direct evaluation from member names.
    const auto snaps = seq.to_input();
    auto dc_of_member = [&](std::size_t t, const std::string& name) -> std::optional<DcId> {
        for (std::size_t c = 0; c < snaps[t].clusters.size(); ++c) {
            const auto& cl = snaps[t].clusters[c];
            if (std::find(cl.begin(), cl.end(), name) != cl.end()) return result.label({t, c});
        }
        return std::nullopt;
    };
    std::set<std::pair<std::size_t, DcId>> splits, merges;
    for (std::size_t t = 0; t + 1 < snaps.size(); ++t) {
        for (std::size_t c = 0; c < snaps[t].clusters.size(); ++c) {
            std::set<DcId> after;
            for (const auto& m : snaps[t].clusters[c]) {
                if (auto d = dc_of_member(t + 1, m)) after.insert(*d);
            }
            if (after.size() >= 2) splits.insert({t + 1, result.label({t, c})});
        }
        for (std::size_t c = 0; c < snaps[t + 1].clusters.size(); ++c) {
            std::set<DcId> before;
            for (const auto& m : snaps[t + 1].clusters[c]) {
                if (auto d = dc_of_member(t, m)) before.insert(*d);
            }
            if (before.size() >= 2) merges.insert({t + 1, result.label({t + 1, c})});
        }
    }
    std::set<std::pair<std::size_t, DcId>> got_splits, got_merges;
    for (const auto& e : of_kind(events, EventKind::split)) got_splits.insert({e.time, e.dc});
    for (const auto& e : of_kind(events, EventKind::merge)) got_merges.insert({e.time, e.dc});
    CHECK(got_splits == splits);
    CHECK(got_merges == merges);

    CHECK(splits.count({2, result.label({1, 0})}) == 1);
    REQUIRE(of_kind(events, EventKind::split).size() == 1);
    CHECK(of_kind(events, EventKind::split)[0].related.size() == 1);
    REQUIRE(of_kind(events, EventKind::merge).size() == 1);
    CHECK(of_kind(events, EventKind::merge)[0].time == 4);
}

TEST_CASE("events are ordered by time") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto seq = ClusteringSequence::build(testing::random_instance(seed));
        const auto events = classify_events(track(seq, 2), seq);
        for (std::size_t i = 1; i < events.size(); ++i) REQUIRE(events[i - 1].time <= events[i].time);
        for (const auto& e : events) REQUIRE(e.time < seq.size());
    }
}
