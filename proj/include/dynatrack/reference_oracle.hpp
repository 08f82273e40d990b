#pragma once
// Brute-force reference for the DC detection procedure.
//
// Everything is recomputed from member-name sets on every query: no
// relation cache, no incremental state beyond the label table. Intended
// for desk-scale instances only.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dynatrack/dynamic_clustering.hpp"
#include "dynatrack/snapshot_model.hpp"

namespace dynatrack {

struct OracleLimits {
    std::size_t max_snapshots = 8;
    std::size_t max_clusters = 40;
};

class OracleRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleRun {
    DynamicClustering result;
    /// DCs whose clusters do not form one connected ensemble under the
    /// "belongs to the identity flow / marginals / source set of" relation.
    std::vector<DcId> non_minimal;
};

/// Throws OracleRefused if `seq` exceeds `limits`.
OracleRun brute_force_run(const ClusteringSequence& seq, std::size_t history,
                          OracleLimits limits = {});

DynamicClustering brute_force_track(const ClusteringSequence& seq, std::size_t history,
                                    OracleLimits limits = {});

}  // namespace dynatrack
