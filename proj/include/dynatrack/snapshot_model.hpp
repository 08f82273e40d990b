#pragma once
// Snapshot data model: an ordered sequence of clusterings over opaque member
// IDs. Member IDs are interned to dense integers on construction; clusters
// store sorted integer member lists.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dynatrack {

using MemberId = std::uint32_t;

/// Handle for one cluster: snapshot index and cluster index within it.
struct ClusterRef {
    std::size_t time = 0;
    std::size_t cluster = 0;

    friend auto operator<=>(const ClusterRef&, const ClusterRef&) = default;
};

/// Sorted, duplicate-free list of cluster handles.
using ClusterSet = std::vector<ClusterRef>;

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class InputFormat { json, csv };

/// Raw, name-based description of one snapshot (input/output form).
struct SnapshotInput {
    std::optional<std::string> label;
    std::vector<std::vector<std::string>> clusters;

    friend bool operator==(const SnapshotInput&, const SnapshotInput&) = default;
};

class ClusteringSequence {
public:
    ClusteringSequence() = default;

    /// Validates and interns. Throws ValidationError on an empty sequence,
    /// an empty cluster, an empty member ID, or a member repeated within a
    /// snapshot.
    static ClusteringSequence build(const std::vector<SnapshotInput>& snapshots);

    std::size_t size() const { return snapshots_.size(); }
    std::size_t cluster_count(std::size_t time) const;
    std::size_t total_clusters() const;
    std::size_t member_count() const { return names_.size(); }

    /// Sorted member IDs of one cluster.
    std::span<const MemberId> members(ClusterRef ref) const;
    /// Sorted member IDs present anywhere in snapshot `time`.
    std::span<const MemberId> present(std::size_t time) const;

    const std::string& member_name(MemberId id) const { return names_.at(id); }
    std::optional<MemberId> find_member(std::string_view name) const;

    const std::optional<std::string>& label(std::size_t time) const;

    bool contains(ClusterRef ref) const {
        return ref.time < size() && ref.cluster < cluster_count(ref.time);
    }

    /// Byte-sorted member names of one cluster.
    std::vector<std::string> member_names(ClusterRef ref) const;

    /// Name-based form; member names sorted bytewise within each cluster.
    std::vector<SnapshotInput> to_input() const;

    friend bool operator==(const ClusteringSequence& a, const ClusteringSequence& b) {
        return a.to_input() == b.to_input();
    }

private:
    struct Snapshot {
        std::optional<std::string> label;
        std::vector<std::vector<MemberId>> clusters;
        std::vector<MemberId> present;
    };

    std::vector<std::string> names_;
    std::unordered_map<std::string, MemberId> ids_;
    std::vector<Snapshot> snapshots_;
};

ClusteringSequence parse_sequence(std::string_view text, InputFormat format);
ClusteringSequence parse_sequence(std::istream& in, InputFormat format);

std::string to_json(const ClusteringSequence& seq);
std::string to_csv(const ClusteringSequence& seq);

/// Members present in both snapshot i and snapshot j (sorted).
std::vector<MemberId> residents(const ClusteringSequence& seq, std::size_t i, std::size_t j);

/// Line/column (1-based) of a byte offset within `text`.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset);

}  // namespace dynatrack
