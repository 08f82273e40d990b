#include "dynatrack/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "dynatrack/alluvial.hpp"
#include "dynatrack/lifecycle.hpp"
#include "dynatrack/reference_oracle.hpp"
#include "dynatrack/result_io.hpp"
#include "dynatrack/sweep.hpp"
#include "dynatrack/synthetic.hpp"
#include "dynatrack/tracking.hpp"

namespace dynatrack {

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return buf.str();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write " + path);
    file << text;
    if (!file.flush()) throw IoError("cannot write " + path);
}

InputFormat pick_format(const std::string& flag, const std::string& path) {
    if (flag == "csv") return InputFormat::csv;
    if (flag == "json") return InputFormat::json;
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    return csv ? InputFormat::csv : InputFormat::json;
}

struct Options {
    std::string input;
    std::string format;
    std::string output;
    std::string result;
    std::string summary;
    std::string layout;
    std::string spec;
    std::string truth;
    std::size_t history = 0;
    std::size_t history_min = 0;
    std::size_t history_max = 0;
    std::size_t block_width = AlluvialOptions{}.block_width;
    std::size_t gap = AlluvialOptions{}.gap;
    OracleLimits limits;
};

void add_input(CLI::App* cmd, Options& o) {
    cmd->add_option("--input", o.input, "Clustering sequence (JSON or CSV, - for stdin)")->required();
    cmd->add_option("--format", o.format, "Input format (default: from file extension)")
        ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamic cluster tracking over clustering snapshots", "dynatrack"};
    app.require_subcommand(1);
    Options o;

    auto* track_cmd = app.add_subcommand("track", "Track dynamic clusters and write a result document");
    add_input(track_cmd, o);
    track_cmd->add_option("--history", o.history, "History length x (>= 1)")
        ->required()
        ->check(CLI::PositiveNumber);
    track_cmd->add_option("--output", o.output, "Result file (default: stdout)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Track for every x in a range and report scores as CSV");
    add_input(sweep_cmd, o);
    sweep_cmd->add_option("--history-min", o.history_min, "Smallest x")->required()->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--history-max", o.history_max, "Largest x")->required()->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--output", o.output, "CSV file (default: stdout)");
    sweep_cmd->add_option("--summary", o.summary, "Also write histograms and best-x flags as JSON");

    auto* events_cmd = app.add_subcommand("events", "List life-cycle events of a result document");
    events_cmd->add_option("--result", o.result, "Result document written by track")->required();
    events_cmd->add_option("--output", o.output, "Events file (default: stdout)");

    auto* render_cmd = app.add_subcommand("render", "Draw a result document as an alluvial SVG");
    render_cmd->add_option("--result", o.result, "Result document written by track")->required();
    render_cmd->add_option("--output", o.output, "SVG file (default: stdout)");
    render_cmd->add_option("--layout", o.layout, "Also write the layout as JSON");
    render_cmd->add_option("--block-width", o.block_width, "Block width in layout units")
        ->check(CLI::PositiveNumber);
    render_cmd->add_option("--gap", o.gap, "Vertical gap between blocks");

    auto* generate_cmd = app.add_subcommand("generate", "Generate a sequence with planted dynamic clusters");
    generate_cmd->add_option("--spec", o.spec, "Scenario JSON")->required();
    generate_cmd->add_option("--output", o.output, "Sequence file (default: stdout)");
    generate_cmd->add_option("--truth", o.truth, "Write planted labels to this file");
    generate_cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* oracle_cmd = app.add_subcommand("oracle", "Run the brute-force reference on a small input");
    add_input(oracle_cmd, o);
    oracle_cmd->add_option("--history", o.history, "History length x (>= 1)")
        ->required()
        ->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--output", o.output, "Result file (default: stdout)");
    oracle_cmd->add_option("--max-snapshots", o.limits.max_snapshots, "Refuse longer inputs");
    oracle_cmd->add_option("--max-clusters", o.limits.max_clusters, "Refuse inputs with more clusters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        auto load = [&] {
            return parse_sequence(read_file(o.input), pick_format(o.format, o.input));
        };
        if (*track_cmd) {
            const auto seq = load();
            emit(o.output, write_result(seq, track(seq, o.history)), out);
        } else if (*sweep_cmd) {
            if (o.history_min > o.history_max) {
                err << "sweep: --history-min must not exceed --history-max\n";
                return exit_usage;
            }
            const auto seq = load();
            const auto rows = sweep(seq, o.history_min, o.history_max);
            emit(o.output, sweep_csv(rows), out);
            if (!o.summary.empty()) emit(o.summary, sweep_summary_json(rows), out);
        } else if (*events_cmd) {
            const auto doc = read_result(read_file(o.result));
            emit(o.output,
                 events_to_json(classify_events(doc.clustering, doc.sequence), doc.clustering.history()),
                 out);
        } else if (*render_cmd) {
            const auto doc = read_result(read_file(o.result));
            AlluvialOptions opts;
            opts.block_width = o.block_width;
            opts.gap = o.gap;
            const auto layout = layout_alluvial(doc.sequence, doc.clustering, opts);
            emit(o.output, to_svg(layout), out);
            if (!o.layout.empty()) emit(o.layout, to_json(layout), out);
        } else if (*generate_cmd) {
            const auto scenario = generate(parse_scenario(read_file(o.spec)));
            emit(o.output, o.format == "csv" ? to_csv(scenario.sequence) : to_json(scenario.sequence), out);
            if (!o.truth.empty()) emit(o.truth, truth_to_json(scenario), out);
        } else if (*oracle_cmd) {
            const auto seq = load();
            emit(o.output, write_result(seq, brute_force_track(seq, o.history, o.limits)), out);
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const GenerationError& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const OracleRefused& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    return exit_ok;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"dynatrack"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace dynatrack
