#pragma once
// Result documents (schema 1): a tracked sequence with its DC labels.

#include <string>
#include <string_view>
#include <vector>

#include "dynatrack/dynamic_clustering.hpp"
#include "dynatrack/lifecycle.hpp"
#include "dynatrack/snapshot_model.hpp"

namespace dynatrack {

inline constexpr std::string_view tool_name = "dynatrack";
inline constexpr std::string_view tool_version = "0.1.0";
inline constexpr int result_schema = 1;

struct TrackedResult {
    ClusteringSequence sequence;
    DynamicClustering clustering;
};

/// DC ids are renumbered by first appearance before writing.
std::string write_result(const ClusteringSequence& seq, const DynamicClustering& dcs);

/// Throws ParseError on malformed JSON and ValidationError on a document
/// that does not follow the schema.
TrackedResult read_result(std::string_view text);

std::string events_to_json(const std::vector<LifecycleEvent>& events, std::size_t history);

}  // namespace dynatrack
