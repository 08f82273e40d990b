#include "dynatrack/alluvial.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <span>
#include <stdexcept>

#include <json.hpp>

namespace dynatrack {

namespace {

std::string num(double v) {
    char buf[32];
    if (v == static_cast<double>(static_cast<long long>(v))) {
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    } else {
        std::snprintf(buf, sizeof buf, "%.1f", v);
    }
    return buf;
}

std::string escape(std::string_view text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::size_t shared(std::span<const MemberId> a, std::span<const MemberId> b) {
    std::size_t n = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else { ++n; ++i; ++j; }
    }
    return n;
}

// One ribbon edge from (x1, y1) to (x2, y2): a quadratic curve to the
// midpoint, continued smoothly by its reflection.
std::string edge(double x1, double y1, double x2, double y2) {
    const double mx = (x1 + x2) / 2;
    const double my = (y1 + y2) / 2;
    const double cx = (x1 + mx) / 2;
    return "Q" + num(cx) + "," + num(y1) + " " + num(mx) + "," + num(my) + " T" + num(x2) + "," +
           num(y2);
}

}  // namespace

const AlluvialBlock& AlluvialLayout::block(ClusterRef ref) const {
    for (const auto& b : blocks.at(ref.time)) {
        if (b.ref == ref) return b;
    }
    throw std::out_of_range("no block for cluster");
}

AlluvialLayout layout_alluvial(const ClusteringSequence& seq, const DynamicClustering& dcs,
                               const AlluvialOptions& options) {
    const DynamicClustering canon = dcs.canonical(seq);
    AlluvialLayout out;
    out.block_width = options.block_width;
    std::size_t tallest = 0;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        std::vector<AlluvialBlock> column;
        for (std::size_t c = 0; c < seq.cluster_count(t); ++c) {
            AlluvialBlock b;
            b.ref = {t, c};
            b.dc = canon.label(b.ref);
            b.height = seq.members(b.ref).size();
            b.color = dc_palette[b.dc % dc_palette.size()];
            column.push_back(b);
        }
        std::sort(column.begin(), column.end(), [](const AlluvialBlock& a, const AlluvialBlock& b) {
            return a.dc != b.dc ? a.dc < b.dc : a.ref.cluster < b.ref.cluster;
        });
        out.column_x.push_back(options.margin + t * (options.block_width + options.column_gap));
        std::size_t y = options.margin;
        for (auto& b : column) {
            b.x = out.column_x.back();
            b.y = y;
            y += b.height + options.gap;
        }
        const std::size_t used = column.empty() ? options.margin : y - options.gap;
        tallest = std::max(tallest, used);
        out.blocks.push_back(std::move(column));
        out.column_labels.push_back(seq.label(t) ? *seq.label(t) : std::to_string(t));
    }
    // Column labels sit below the tallest column.
    out.height = tallest + options.margin + 20;
    out.width = 2 * options.margin + seq.size() * options.block_width +
                (seq.size() > 0 ? seq.size() - 1 : 0) * options.column_gap;

    for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
        std::vector<AlluvialFlow> flows;
        for (const auto& src : out.blocks[t]) {
            for (const auto& dst : out.blocks[t + 1]) {
                const std::size_t n = shared(seq.members(src.ref), seq.members(dst.ref));
                if (n > 0) flows.push_back({src.ref, dst.ref, n, 0, 0});
            }
        }
        // Out-flows stack in target order, in-flows in source order.
        std::map<ClusterRef, std::size_t> out_offset, in_offset;
        for (auto& f : flows) {
            f.from_y = out.block(f.from).y + out_offset[f.from];
            out_offset[f.from] += f.magnitude;
        }
        std::vector<AlluvialFlow*> by_target;
        for (auto& f : flows) by_target.push_back(&f);
        std::stable_sort(by_target.begin(), by_target.end(), [&](auto* a, auto* b) {
            const auto& ta = out.block(a->to);
            const auto& tb = out.block(b->to);
            return ta.y < tb.y;
        });
        for (auto* f : by_target) {
            f->to_y = out.block(f->to).y + in_offset[f->to];
            in_offset[f->to] += f->magnitude;
        }
        out.flows.push_back(std::move(flows));
    }
    return out;
}

std::string to_svg(const AlluvialLayout& layout) {
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(layout.width) +
         "\" height=\"" + num(layout.height) + "\" viewBox=\"0 0 " + num(layout.width) + " " +
         num(layout.height) + "\">\n";
    s += "<g class=\"flows\" fill-opacity=\"0.45\">\n";
    for (const auto& pair : layout.flows) {
        for (const auto& f : pair) {
            const auto& src = layout.block(f.from);
            const auto& dst = layout.block(f.to);
            const double x1 = static_cast<double>(src.x + layout.block_width);
            const double x2 = static_cast<double>(dst.x);
            const double a = static_cast<double>(f.from_y);
            const double b = static_cast<double>(f.to_y);
            const double m = static_cast<double>(f.magnitude);
            s += "<path d=\"M" + num(x1) + "," + num(a) + " " + edge(x1, a, x2, b) + " L" + num(x2) +
                 "," + num(b + m) + " " + edge(x2, b + m, x1, a + m) + " Z\" fill=\"" +
                 std::string(src.color) + "\"/>\n";
        }
    }
    s += "</g>\n<g class=\"blocks\">\n";
    for (const auto& column : layout.blocks) {
        for (const auto& b : column) {
            s += "<rect x=\"" + num(b.x) + "\" y=\"" + num(b.y) + "\" width=\"" +
                 num(layout.block_width) + "\" height=\"" + num(b.height) + "\" fill=\"" +
                 std::string(b.color) + "\"><title>snapshot " + std::to_string(b.ref.time) +
                 ", cluster " + std::to_string(b.ref.cluster) + ", dc " + std::to_string(b.dc) +
                 "</title></rect>\n";
        }
    }
    s += "</g>\n<g class=\"labels\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">\n";
    for (std::size_t t = 0; t < layout.column_labels.size(); ++t) {
        const double x = static_cast<double>(layout.column_x[t]) +
                         static_cast<double>(layout.block_width) / 2;
        s += "<text x=\"" + num(x) + "\" y=\"" + num(layout.height - 8) + "\">" +
             escape(layout.column_labels[t]) + "</text>\n";
    }
    s += "</g>\n</svg>\n";
    return s;
}

std::string to_json(const AlluvialLayout& layout) {
    using nlohmann::json;
    json blocks = json::array();
    for (const auto& column : layout.blocks) {
        json col = json::array();
        for (const auto& b : column) {
            col.push_back({{"snapshot", b.ref.time},
                           {"cluster", b.ref.cluster},
                           {"dc", b.dc},
                           {"x", b.x},
                           {"y", b.y},
                           {"height", b.height},
                           {"color", std::string(b.color)}});
        }
        blocks.push_back(std::move(col));
    }
    json flows = json::array();
    for (const auto& pair : layout.flows) {
        for (const auto& f : pair) {
            flows.push_back({{"from", {f.from.time, f.from.cluster}},
                             {"to", {f.to.time, f.to.cluster}},
                             {"magnitude", f.magnitude},
                             {"from_y", f.from_y},
                             {"to_y", f.to_y}});
        }
    }
    json doc{{"schema", 1},
             {"width", layout.width},
             {"height", layout.height},
             {"block_width", layout.block_width},
             {"columns", layout.column_labels},
             {"blocks", std::move(blocks)},
             {"flows", std::move(flows)}};
    return doc.dump(2) + "\n";
}

}  // namespace dynatrack
