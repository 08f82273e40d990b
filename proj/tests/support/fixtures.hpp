#pragma once
// Hand-built sequences shared by the unit and acceptance tests.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dynatrack/snapshot_model.hpp"
#include "dynatrack/synthetic.hpp"

namespace dynatrack::testing {

inline std::string fixture_path(const std::string& name) {
    return std::string(DYNATRACK_FIXTURES) + "/" + name;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline ClusteringSequence seq_of(const std::vector<std::vector<std::vector<std::string>>>& snaps) {
    std::vector<SnapshotInput> in;
    for (const auto& s : snaps) in.push_back({std::nullopt, s});
    return ClusteringSequence::build(in);
}

/// Four snapshots around a target G at t3 whose source set is the merged
/// cluster S at t1:
///   t0  P={1,2,3}  Q={4,5,6}  R={7,8}
///   t1  S={1..6}             U={7,8}
///   t2  A={1,2,3,4}  B={5,6}  U={7,8}
///   t3  G={1..6}             U={7,8}
inline ClusteringSequence association_sequence() {
    return seq_of({{{"1", "2", "3"}, {"4", "5", "6"}, {"7", "8"}},
                   {{"1", "2", "3", "4", "5", "6"}, {"7", "8"}},
                   {{"1", "2", "3", "4"}, {"5", "6"}, {"7", "8"}},
                   {{"1", "2", "3", "4", "5", "6"}, {"7", "8"}}});
}

/// A six-member group that splinters for one snapshot at t3 and reunites
/// at t4, next to an unrelated pair.
inline ClusteringSequence splinter_once_sequence() {
    const std::vector<std::string> all{"1", "2", "3", "4", "5", "6"};
    return seq_of({{all, {"7", "8"}},
                   {all, {"7", "8"}},
                   {all, {"7", "8"}},
                   {{"1", "2", "3", "4"}, {"5", "6"}, {"7", "8"}},
                   {all, {"7", "8"}}});
}

/// One planted DC of 20 members splintering (30%) for `duration`
/// snapshots from t2 on, followed by two undisturbed snapshots.
inline ScenarioSpec splinter_spec(std::size_t duration, std::uint64_t seed = 1) {
    ScenarioSpec spec;
    spec.snapshots = duration + 4;
    spec.seed = seed;
    spec.dcs = {{20, 0, spec.snapshots - 1}};
    spec.events = {{ScenarioEventKind::splinter, 0, 2, duration, 0.3, std::nullopt}};
    return spec;
}

}  // namespace dynatrack::testing
