#pragma once
// Tracking over a range of history values.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dynatrack/lifecycle.hpp"
#include "dynatrack/snapshot_model.hpp"

namespace dynatrack {

struct SweepRow {
    std::size_t history = 0;
    SummaryStats stats;
    std::optional<double> consistency_all;
    std::optional<double> consistency_resident;
    /// Row attains the maximum consistency of its mode over the sweep.
    bool best_all = false;
    bool best_resident = false;
};

inline constexpr const char* sweep_csv_header =
    "x,dc_count,mean_lifespan,weighted_mean_lifespan,consistency_all,consistency_resident";

/// One row per x in [lo, hi], evaluated concurrently. Throws
/// std::invalid_argument if lo > hi.
std::vector<SweepRow> sweep(const ClusteringSequence& seq, std::size_t lo, std::size_t hi);

/// Undefined values are written as empty fields.
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_summary_json(const std::vector<SweepRow>& rows);

}  // namespace dynatrack
