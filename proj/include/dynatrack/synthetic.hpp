#pragma once
// Seeded clustering sequences with planted dynamic clusters.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynatrack/snapshot_model.hpp"

namespace dynatrack {

struct PlantedDc {
    std::size_t size = 1;
    /// Inclusive snapshot interval.
    std::size_t start = 0;
    std::size_t end = 0;

    friend bool operator==(const PlantedDc&, const PlantedDc&) = default;
};

enum class ScenarioEventKind { splinter, transition, split, merge };

std::string_view to_string(ScenarioEventKind kind);

struct ScenarioEvent {
    ScenarioEventKind kind = ScenarioEventKind::splinter;
    std::size_t dc = 0;
    std::size_t start = 0;
    /// Snapshots spent detached (splinter) or in transition.
    std::size_t duration = 1;
    /// Share of members detached (splinter), moved at the first transition
    /// step, or split off.
    double fraction = 0.5;
    /// Receiving DC of a merge.
    std::optional<std::size_t> into;

    friend bool operator==(const ScenarioEvent&, const ScenarioEvent&) = default;
};

struct ScenarioSpec {
    std::size_t snapshots = 1;
    std::vector<PlantedDc> dcs;
    std::vector<ScenarioEvent> events;
    double turnover_rate = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GeneratedScenario {
    ClusteringSequence sequence;
    /// truth[t][c]: planted DC of cluster (t, c). A split creates DC
    /// dcs.size() + (number of earlier split events).
    std::vector<std::vector<std::size_t>> truth;
};

/// Deterministic for a given spec. Throws GenerationError on an infeasible
/// spec (event outside its DC's lifespan, a fraction that leaves a cluster
/// empty, overlapping events on one DC, ...).
GeneratedScenario generate(const ScenarioSpec& spec);

ScenarioSpec parse_scenario(std::string_view json_text);
std::string to_json(const ScenarioSpec& spec);
std::string truth_to_json(const GeneratedScenario& scenario);

}  // namespace dynatrack
