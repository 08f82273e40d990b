#pragma once
// Alluvial diagram layout and SVG export.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dynatrack/dynamic_clustering.hpp"
#include "dynatrack/snapshot_model.hpp"

namespace dynatrack {

inline constexpr std::array<std::string_view, 12> dc_palette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78"};

struct AlluvialOptions {
    std::size_t block_width = 20;
    /// Vertical space between blocks of one column.
    std::size_t gap = 8;
    /// Horizontal space between columns.
    std::size_t column_gap = 80;
    std::size_t margin = 20;
};

struct AlluvialBlock {
    ClusterRef ref;
    DcId dc = 0;
    std::size_t x = 0;
    std::size_t y = 0;
    /// One unit per member.
    std::size_t height = 0;
    std::string_view color;
};

struct AlluvialFlow {
    ClusterRef from;
    ClusterRef to;
    /// Members shared by both clusters.
    std::size_t magnitude = 0;
    /// Top edge of the ribbon at its source and target block.
    std::size_t from_y = 0;
    std::size_t to_y = 0;
};

struct AlluvialLayout {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t block_width = 0;
    /// Left edge of each column.
    std::vector<std::size_t> column_x;
    /// Per snapshot, blocks ordered by (DC id, cluster index).
    std::vector<std::vector<AlluvialBlock>> blocks;
    /// Per snapshot pair (t, t+1).
    std::vector<std::vector<AlluvialFlow>> flows;
    std::vector<std::string> column_labels;

    const AlluvialBlock& block(ClusterRef ref) const;
};

/// DC ids are canonicalized first, so colors do not depend on internal ids.
AlluvialLayout layout_alluvial(const ClusteringSequence& seq, const DynamicClustering& dcs,
                               const AlluvialOptions& options = {});

std::string to_svg(const AlluvialLayout& layout);
std::string to_json(const AlluvialLayout& layout);

}  // namespace dynatrack
