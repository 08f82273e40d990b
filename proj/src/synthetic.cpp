#include "dynatrack/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include <json.hpp>

namespace dynatrack {

namespace {

using nlohmann::json;

// Portable draws on top of mt19937_64 (whose output sequence is fixed by
// the standard): unbiased bounded integers by rejection, doubles from the
// top 53 bits.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}

    std::size_t below(std::size_t n) {
        const std::uint64_t bound = n;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return static_cast<std::size_t>(v % bound);
    }

    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

constexpr std::size_t nobody = ~std::size_t{0};

struct Slot {
    std::string id;
    /// (from snapshot, owning DC), increasing in time.
    std::vector<std::pair<std::size_t, std::size_t>> owners;

    std::size_t owner_at(std::size_t t) const {
        std::size_t dc = nobody;
        for (const auto& [from, d] : owners) {
            if (from <= t) dc = d;
        }
        return dc;
    }
};

// Sub-cluster layout of one DC over a splinter or transition interval.
struct Partition {
    std::size_t dc;
    std::size_t start;
    std::size_t duration;
    bool transition;
    std::size_t first;  // members detached at `start`
    std::vector<std::size_t> order;  // slot indices, detached prefix first

    std::size_t detached(std::size_t t) const {
        if (t < start || t >= start + duration) return 0;
        if (!transition) return first;
        const std::size_t n = order.size();
        const std::size_t step = t - start;
        const std::size_t grown = first + ((n - first) * step + duration - 1) / duration;
        return std::min(grown, n - 1);
    }
};

std::size_t share(double fraction, std::size_t n, const std::string& where) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw GenerationError(where + ": fraction must lie in (0, 1)");
    }
    const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    if (k < 1 || k + 1 > n) {
        throw GenerationError(where + ": fraction " + std::to_string(fraction) + " of " +
                              std::to_string(n) + " members leaves a cluster empty");
    }
    return k;
}

}  // namespace

std::string_view to_string(ScenarioEventKind kind) {
    switch (kind) {
        case ScenarioEventKind::splinter: return "splinter";
        case ScenarioEventKind::transition: return "transition";
        case ScenarioEventKind::split: return "split";
        case ScenarioEventKind::merge: return "merge";
    }
    return "unknown";
}

GeneratedScenario generate(const ScenarioSpec& spec) {
    const std::size_t T = spec.snapshots;
    if (T == 0) throw GenerationError("scenario needs at least one snapshot");
    if (!(spec.turnover_rate >= 0.0 && spec.turnover_rate <= 1.0)) {
        throw GenerationError("turnover_rate must lie in [0, 1]");
    }

    Draw rng(spec.seed);
    std::size_t counter = 0;
    auto fresh_id = [&] { return "m" + std::to_string(counter++); };

    std::vector<std::size_t> first(spec.dcs.size()), last(spec.dcs.size());
    std::vector<Slot> slots;
    for (std::size_t d = 0; d < spec.dcs.size(); ++d) {
        const auto& p = spec.dcs[d];
        const std::string where = "dc " + std::to_string(d);
        if (p.size == 0) throw GenerationError(where + ": size must be positive");
        if (p.start > p.end || p.end >= T) {
            throw GenerationError(where + ": lifespan [" + std::to_string(p.start) + ", " +
                                  std::to_string(p.end) + "] is outside the sequence");
        }
        first[d] = p.start;
        last[d] = p.end;
        for (std::size_t i = 0; i < p.size; ++i) slots.push_back({fresh_id(), {{p.start, d}}});
    }

    auto slots_of = [&](std::size_t dc, std::size_t t) {
        std::vector<std::size_t> out;
        for (std::size_t s = 0; s < slots.size(); ++s) {
            if (slots[s].owner_at(t) == dc) out.push_back(s);
        }
        return out;
    };

    // Busy intervals per DC, to reject overlapping events.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> busy(spec.dcs.size());
    auto occupy = [&](std::size_t dc, std::size_t from, std::size_t to, const std::string& where) {
        for (const auto& [a, b] : busy[dc]) {
            if (from <= b && a <= to) throw GenerationError(where + ": overlaps another event");
        }
        busy[dc].emplace_back(from, to);
    };

    std::vector<Partition> partitions;
    std::size_t previous_start = 0;
    for (std::size_t e = 0; e < spec.events.size(); ++e) {
        const auto& ev = spec.events[e];
        const std::string where = "event " + std::to_string(e);
        if (ev.start < previous_start) {
            throw GenerationError(where + ": events must be listed by start snapshot");
        }
        previous_start = ev.start;
        if (ev.dc >= first.size()) throw GenerationError(where + ": unknown dc");
        const std::size_t d = ev.dc;
        if (ev.start < first[d] || ev.start > last[d]) {
            throw GenerationError(where + ": starts outside the lifespan of dc " + std::to_string(d));
        }
        const auto pool = slots_of(d, ev.start);

        switch (ev.kind) {
            case ScenarioEventKind::splinter:
            case ScenarioEventKind::transition: {
                if (ev.duration < 1) throw GenerationError(where + ": duration must be at least 1");
                const std::size_t stop = ev.start + ev.duration - 1;
                if (stop > last[d]) {
                    throw GenerationError(where + ": ends outside the lifespan of dc " +
                                          std::to_string(d));
                }
                occupy(d, ev.start, stop, where);
                Partition part{d, ev.start, ev.duration, ev.kind == ScenarioEventKind::transition,
                               share(ev.fraction, pool.size(), where), pool};
                rng.shuffle(part.order);
                partitions.push_back(std::move(part));
                break;
            }
            case ScenarioEventKind::split: {
                if (ev.start == first[d]) {
                    throw GenerationError(where + ": a split needs a snapshot before it");
                }
                occupy(d, ev.start, ev.start, where);
                auto moved = pool;
                rng.shuffle(moved);
                moved.resize(share(ev.fraction, pool.size(), where));
                const std::size_t created = first.size();
                first.push_back(ev.start);
                last.push_back(last[d]);
                busy.emplace_back();
                for (std::size_t s : moved) slots[s].owners.emplace_back(ev.start, created);
                break;
            }
            case ScenarioEventKind::merge: {
                if (!ev.into || *ev.into >= first.size() || *ev.into == d) {
                    throw GenerationError(where + ": merge needs a different receiving dc");
                }
                const std::size_t into = *ev.into;
                if (ev.start == first[d] || ev.start < first[into] || ev.start > last[into]) {
                    throw GenerationError(where + ": both dcs must exist before and at the merge");
                }
                occupy(d, ev.start, ev.start, where);
                occupy(into, ev.start, ev.start, where);
                for (std::size_t s : pool) slots[s].owners.emplace_back(ev.start, into);
                last[d] = ev.start - 1;
                break;
            }
        }
    }

    std::vector<SnapshotInput> snapshots(T);
    std::vector<std::vector<std::size_t>> truth(T);
    std::vector<std::size_t> owner(slots.size());
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t s = 0; s < slots.size(); ++s) {
            const std::size_t d = slots[s].owner_at(t);
            owner[s] = d != nobody && first[d] <= t && t <= last[d] ? d : nobody;
        }
        if (t > 0 && spec.turnover_rate > 0.0) {
            for (std::size_t s = 0; s < slots.size(); ++s) {
                if (owner[s] != nobody && rng.chance(spec.turnover_rate)) slots[s].id = fresh_id();
            }
        }
        for (std::size_t d = 0; d < first.size(); ++d) {
            std::vector<bool> detached(slots.size(), false);
            for (const auto& part : partitions) {
                if (part.dc != d) continue;
                const std::size_t k = part.detached(t);
                for (std::size_t i = 0; i < k; ++i) detached[part.order[i]] = true;
            }
            std::vector<std::string> main, sub;
            for (std::size_t s = 0; s < slots.size(); ++s) {
                if (owner[s] != d) continue;
                (detached[s] ? sub : main).push_back(slots[s].id);
            }
            for (auto* c : {&main, &sub}) {
                if (c->empty()) continue;
                snapshots[t].clusters.push_back(std::move(*c));
                truth[t].push_back(d);
            }
        }
    }
    return {ClusteringSequence::build(snapshots), std::move(truth)};
}

ScenarioSpec parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError("JSON parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(column),
                         line, column);
    }
    auto need = [](const json& obj, const char* key, const std::string& where) -> const json& {
        auto it = obj.find(key);
        if (it == obj.end()) throw ValidationError(where + ": missing \"" + key + "\"");
        return *it;
    };
    auto count = [](const json& v, const std::string& where) {
        if (!v.is_number_unsigned()) throw ValidationError(where + " must be a non-negative integer");
        return v.get<std::size_t>();
    };
    auto real = [](const json& v, const std::string& where) {
        if (!v.is_number()) throw ValidationError(where + " must be a number");
        return v.get<double>();
    };

    if (!doc.is_object()) throw ValidationError("scenario must be a JSON object");
    ScenarioSpec spec;
    spec.snapshots = count(need(doc, "snapshots", "scenario"), "snapshots");
    if (auto it = doc.find("seed"); it != doc.end()) spec.seed = it->get<std::uint64_t>();
    if (auto it = doc.find("turnover_rate"); it != doc.end()) {
        spec.turnover_rate = real(*it, "turnover_rate");
    }
    const json& dcs = need(doc, "dcs", "scenario");
    if (!dcs.is_array()) throw ValidationError("\"dcs\" must be an array");
    for (std::size_t i = 0; i < dcs.size(); ++i) {
        const std::string where = "dcs[" + std::to_string(i) + "]";
        const json& d = dcs[i];
        if (!d.is_object()) throw ValidationError(where + " must be an object");
        PlantedDc p;
        p.size = count(need(d, "size", where), where + ".size");
        p.start = d.contains("start") ? count(d["start"], where + ".start") : 0;
        p.end = d.contains("end") ? count(d["end"], where + ".end")
                                  : (spec.snapshots > 0 ? spec.snapshots - 1 : 0);
        spec.dcs.push_back(p);
    }
    if (auto it = doc.find("events"); it != doc.end()) {
        if (!it->is_array()) throw ValidationError("\"events\" must be an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string where = "events[" + std::to_string(i) + "]";
            const json& e = (*it)[i];
            if (!e.is_object()) throw ValidationError(where + " must be an object");
            ScenarioEvent ev;
            const json& kind = need(e, "kind", where);
            const std::string k = kind.is_string() ? kind.get<std::string>() : "";
            if (k == "splinter") ev.kind = ScenarioEventKind::splinter;
            else if (k == "transition") ev.kind = ScenarioEventKind::transition;
            else if (k == "split") ev.kind = ScenarioEventKind::split;
            else if (k == "merge") ev.kind = ScenarioEventKind::merge;
            else throw ValidationError(where + ".kind must be splinter, transition, split or merge");
            ev.dc = count(need(e, "dc", where), where + ".dc");
            ev.start = count(need(e, "start", where), where + ".start");
            if (e.contains("duration")) ev.duration = count(e["duration"], where + ".duration");
            if (e.contains("fraction")) ev.fraction = real(e["fraction"], where + ".fraction");
            if (e.contains("into")) ev.into = count(e["into"], where + ".into");
            spec.events.push_back(ev);
        }
    }
    return spec;
}

std::string to_json(const ScenarioSpec& spec) {
    json doc;
    doc["snapshots"] = spec.snapshots;
    doc["seed"] = spec.seed;
    doc["turnover_rate"] = spec.turnover_rate;
    doc["dcs"] = json::array();
    for (const auto& p : spec.dcs) {
        doc["dcs"].push_back({{"size", p.size}, {"start", p.start}, {"end", p.end}});
    }
    doc["events"] = json::array();
    for (const auto& ev : spec.events) {
        json e{{"kind", std::string(to_string(ev.kind))},
               {"dc", ev.dc},
               {"start", ev.start},
               {"duration", ev.duration},
               {"fraction", ev.fraction}};
        if (ev.into) e["into"] = *ev.into;
        doc["events"].push_back(std::move(e));
    }
    return doc.dump(2) + "\n";
}

std::string truth_to_json(const GeneratedScenario& scenario) {
    json doc{{"schema", 1}, {"truth", scenario.truth}};
    return doc.dump(2) + "\n";
}

}  // namespace dynatrack
