#include "dynatrack/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "dynatrack/tracking.hpp"

namespace dynatrack {

namespace {

std::string field(const std::optional<double>& v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", *v);
    return buf;
}

void flag_best(std::vector<SweepRow>& rows, std::optional<double> SweepRow::*value,
               bool SweepRow::*flag) {
    std::optional<double> best;
    for (const auto& r : rows) {
        if (r.*value && (!best || *(r.*value) > *best)) best = r.*value;
    }
    if (!best) return;
    for (auto& r : rows) r.*flag = r.*value && *(r.*value) == *best;
}

}  // namespace

std::vector<SweepRow> sweep(const ClusteringSequence& seq, std::size_t lo, std::size_t hi) {
    if (lo > hi) throw std::invalid_argument("history-min exceeds history-max");
    std::vector<SweepRow> rows(hi - lo + 1);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            const auto result = track(seq, lo + i);
            auto& row = rows[i];
            row.history = lo + i;
            row.stats = summary_stats(result);
            row.consistency_all = total_consistency(result, seq, ConsistencyMode::all_members);
            row.consistency_resident = total_consistency(result, seq, ConsistencyMode::residents_only);
        }
    };
    const std::size_t workers =
        std::min<std::size_t>(rows.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    flag_best(rows, &SweepRow::consistency_all, &SweepRow::best_all);
    flag_best(rows, &SweepRow::consistency_resident, &SweepRow::best_resident);
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = std::string(sweep_csv_header) + "\n";
    for (const auto& r : rows) {
        out += std::to_string(r.history) + "," + std::to_string(r.stats.dc_count) + "," +
               field(r.stats.mean_lifespan) + "," + field(r.stats.weighted_mean_lifespan) + "," +
               field(r.consistency_all) + "," + field(r.consistency_resident) + "\n";
    }
    return out;
}

std::string sweep_summary_json(const std::vector<SweepRow>& rows) {
    using nlohmann::json;
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json list = json::array();
    json best_all = json::array(), best_resident = json::array();
    for (const auto& r : rows) {
        json hist = json::object();
        for (const auto& [span, n] : r.stats.lifespan_histogram) hist[std::to_string(span)] = n;
        list.push_back({{"x", r.history},
                        {"dc_count", r.stats.dc_count},
                        {"mean_lifespan", opt(r.stats.mean_lifespan)},
                        {"weighted_mean_lifespan", opt(r.stats.weighted_mean_lifespan)},
                        {"lifespan_histogram", std::move(hist)},
                        {"consistency_all", opt(r.consistency_all)},
                        {"consistency_resident", opt(r.consistency_resident)}});
        if (r.best_all) best_all.push_back(r.history);
        if (r.best_resident) best_resident.push_back(r.history);
    }
    json doc{{"schema", 1},
             {"rows", std::move(list)},
             {"best_x_all", std::move(best_all)},
             {"best_x_resident", std::move(best_resident)}};
    return doc.dump(2) + "\n";
}

}  // namespace dynatrack
