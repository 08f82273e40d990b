#include "dynatrack/snapshot_model.hpp"

#include <algorithm>
#include <charconv>
#include <iterator>
#include <map>
#include <sstream>

#include <json.hpp>

namespace dynatrack {

using nlohmann::json;

ClusteringSequence ClusteringSequence::build(const std::vector<SnapshotInput>& snapshots) {
    if (snapshots.empty()) {
        throw ValidationError("sequence must contain at least one snapshot");
    }
    ClusteringSequence seq;
    seq.snapshots_.reserve(snapshots.size());
    std::vector<std::size_t> seen_in;  // member -> snapshot index + 1 of last sighting
    for (std::size_t t = 0; t < snapshots.size(); ++t) {
        const auto& in = snapshots[t];
        Snapshot snap;
        snap.label = in.label;
        snap.clusters.reserve(in.clusters.size());
        for (std::size_t c = 0; c < in.clusters.size(); ++c) {
            const auto& names = in.clusters[c];
            if (names.empty()) {
                throw ValidationError("snapshot " + std::to_string(t) + ": cluster " +
                                      std::to_string(c) + " is empty");
            }
            std::vector<MemberId> ids;
            ids.reserve(names.size());
            for (const auto& name : names) {
                if (name.empty()) {
                    throw ValidationError("snapshot " + std::to_string(t) +
                                          ": empty member ID in cluster " + std::to_string(c));
                }
                auto [it, inserted] =
                    seq.ids_.try_emplace(name, static_cast<MemberId>(seq.names_.size()));
                if (inserted) {
                    seq.names_.push_back(name);
                    seen_in.push_back(0);
                }
                const MemberId id = it->second;
                if (seen_in[id] == t + 1) {
                    throw ValidationError("snapshot " + std::to_string(t) + ": duplicate member '" +
                                          name + "'");
                }
                seen_in[id] = t + 1;
                ids.push_back(id);
            }
            std::sort(ids.begin(), ids.end());
            snap.present.insert(snap.present.end(), ids.begin(), ids.end());
            snap.clusters.push_back(std::move(ids));
        }
        std::sort(snap.present.begin(), snap.present.end());
        seq.snapshots_.push_back(std::move(snap));
    }
    return seq;
}

std::size_t ClusteringSequence::cluster_count(std::size_t time) const {
    return snapshots_.at(time).clusters.size();
}

std::size_t ClusteringSequence::total_clusters() const {
    std::size_t n = 0;
    for (const auto& s : snapshots_) n += s.clusters.size();
    return n;
}

std::span<const MemberId> ClusteringSequence::members(ClusterRef ref) const {
    return snapshots_.at(ref.time).clusters.at(ref.cluster);
}

std::span<const MemberId> ClusteringSequence::present(std::size_t time) const {
    return snapshots_.at(time).present;
}

std::optional<MemberId> ClusteringSequence::find_member(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

const std::optional<std::string>& ClusteringSequence::label(std::size_t time) const {
    return snapshots_.at(time).label;
}

std::vector<std::string> ClusteringSequence::member_names(ClusterRef ref) const {
    std::vector<std::string> out;
    for (MemberId id : members(ref)) out.push_back(names_[id]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SnapshotInput> ClusteringSequence::to_input() const {
    std::vector<SnapshotInput> out;
    out.reserve(size());
    for (std::size_t t = 0; t < size(); ++t) {
        SnapshotInput s;
        s.label = snapshots_[t].label;
        for (std::size_t c = 0; c < cluster_count(t); ++c) {
            s.clusters.push_back(member_names({t, c}));
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<MemberId> residents(const ClusteringSequence& seq, std::size_t i, std::size_t j) {
    if (i >= seq.size() || j >= seq.size()) {
        throw std::out_of_range("residents: snapshot index out of range");
    }
    auto a = seq.present(i);
    auto b = seq.present(j);
    std::vector<MemberId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < offset; ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

namespace {

ClusteringSequence parse_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // nlohmann reports the 1-based offset of the offending byte
        auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("JSON parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + e.what(),
                         line, col);
    }
    if (!doc.is_object() || !doc.contains("snapshots") || !doc["snapshots"].is_array()) {
        throw ValidationError("JSON input must be an object with a \"snapshots\" array");
    }
    std::vector<SnapshotInput> snaps;
    const auto& arr = doc["snapshots"];
    for (std::size_t t = 0; t < arr.size(); ++t) {
        const auto& s = arr[t];
        const std::string where = "snapshot " + std::to_string(t);
        if (!s.is_object()) throw ValidationError(where + ": must be an object");
        SnapshotInput in;
        if (auto it = s.find("label"); it != s.end() && !it->is_null()) {
            if (!it->is_string()) throw ValidationError(where + ": label must be a string");
            in.label = it->get<std::string>();
        }
        auto cl = s.find("clusters");
        if (cl == s.end() || !cl->is_array()) {
            throw ValidationError(where + ": \"clusters\" must be an array");
        }
        for (const auto& c : *cl) {
            if (!c.is_array()) throw ValidationError(where + ": each cluster must be an array");
            std::vector<std::string> names;
            for (const auto& m : c) {
                if (!m.is_string()) throw ValidationError(where + ": member IDs must be strings");
                names.push_back(m.get<std::string>());
            }
            in.clusters.push_back(std::move(names));
        }
        snaps.push_back(std::move(in));
    }
    return ClusteringSequence::build(snaps);
}

// Splits one CSV record; supports RFC 4180 double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        char ch = line[k];
        if (quoted) {
            if (ch == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    cur.push_back('"');
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"' && cur.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(ch);
        }
    }
    if (quoted) {
        throw ParseError("CSV parse error at line " + std::to_string(line_no) +
                             ": unterminated quoted field",
                         line_no, line.size() + 1);
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::size_t parse_index(const std::string& field, std::size_t line_no, std::size_t col,
                        const char* what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("CSV parse error at line " + std::to_string(line_no) + ": " + what +
                             " must be a non-negative integer, got '" + field + "'",
                         line_no, col);
    }
    return value;
}

ClusteringSequence parse_csv(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    // t -> cluster -> members, in row order
    std::map<std::size_t, std::map<std::size_t, std::vector<std::string>>> rows;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "t,member,cluster") {
                throw ParseError("CSV parse error at line " + std::to_string(line_no) +
                                     ": expected header 't,member,cluster'",
                                 line_no, 1);
            }
            header_seen = true;
            continue;
        }
        auto fields = split_csv_line(line, line_no);
        if (fields.size() != 3) {
            throw ParseError("CSV parse error at line " + std::to_string(line_no) +
                                 ": expected 3 fields, got " + std::to_string(fields.size()),
                             line_no, 1);
        }
        const std::size_t t = parse_index(fields[0], line_no, 1, "t");
        const std::size_t c = parse_index(fields[2], line_no, fields[0].size() + fields[1].size() + 3,
                                          "cluster");
        rows[t][c].push_back(std::move(fields[1]));
    }
    if (!header_seen) throw ParseError("CSV parse error: missing header", 1, 1);
    if (rows.empty()) throw ValidationError("sequence must contain at least one snapshot");

    std::vector<SnapshotInput> snaps;
    std::size_t expected_t = 0;
    for (auto& [t, clusters] : rows) {
        if (t != expected_t) {
            throw ValidationError("CSV input: snapshot index " + std::to_string(expected_t) +
                                  " is missing (indices must be contiguous from 0)");
        }
        ++expected_t;
        SnapshotInput in;
        std::size_t expected_c = 0;
        for (auto& [c, members] : clusters) {
            if (c != expected_c) {
                throw ValidationError("snapshot " + std::to_string(t) + ": cluster " +
                                      std::to_string(expected_c) + " is empty");
            }
            ++expected_c;
            in.clusters.push_back(std::move(members));
        }
        snaps.push_back(std::move(in));
    }
    return ClusteringSequence::build(snaps);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

}  // namespace

ClusteringSequence parse_sequence(std::string_view text, InputFormat format) {
    return format == InputFormat::json ? parse_json(text) : parse_csv(text);
}

ClusteringSequence parse_sequence(std::istream& in, InputFormat format) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_sequence(text, format);
}

std::string to_json(const ClusteringSequence& seq) {
    json doc;
    doc["snapshots"] = json::array();
    for (const auto& s : seq.to_input()) {
        json js;
        if (s.label) js["label"] = *s.label;
        js["clusters"] = s.clusters;
        doc["snapshots"].push_back(std::move(js));
    }
    return doc.dump() + "\n";
}

std::string to_csv(const ClusteringSequence& seq) {
    std::string out = "t,member,cluster\n";
    for (std::size_t t = 0; t < seq.size(); ++t) {
        for (std::size_t c = 0; c < seq.cluster_count(t); ++c) {
            for (const auto& name : seq.member_names({t, c})) {
                out += std::to_string(t) + "," + csv_field(name) + "," + std::to_string(c) + "\n";
            }
        }
    }
    return out;
}

}  // namespace dynatrack
