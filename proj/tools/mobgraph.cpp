#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mobgraph/mobgraph.hpp"

namespace fs = std::filesystem;
using namespace mobgraph;

namespace {

pipeline::KeyValues parse_overrides(const std::vector<std::string>& sets) {
    pipeline::KeyValues kv;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error(ErrorCategory::Config, "--set expects key=value, got '" + s + "'");
        kv[std::string(util::trim(s.substr(0, eq)))] = std::string(util::trim(s.substr(eq + 1)));
    }
    return kv;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    pipeline::write_file_atomic(path, content);
}

struct RunOptions {
    std::string config;
    std::vector<std::string> sets;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;

    void attach(CLI::App* cmd) {
        cmd->add_option("-c,--config", config, "Run config (key = value lines)")->check(CLI::ExistingFile);
        cmd->add_option("--set", sets, "Override a config key (key=value); repeatable");
        cmd->add_option("-o,--output-dir", output_dir, "Output directory");
        cmd->add_option("--seed", seed, "Root seed");
        cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
    }

    pipeline::RunConfig load() const {
        auto kv = parse_overrides(sets);
        if (!output_dir.empty()) kv["output_dir"] = fs::absolute(output_dir).string();
        if (seed) kv["seed"] = std::to_string(*seed);
        if (threads) kv["threads"] = std::to_string(*threads);
        std::optional<fs::path> file;
        if (!config.empty()) file = config;
        return pipeline::load_config(file, kv);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Country-level mobility network analysis", std::string(kToolName)};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    RunOptions build_opts;
    auto* build = app.add_subcommand("build", "Ingest check-ins or flow matrices into country graphs");
    build_opts.attach(build);

    RunOptions analyze_opts;
    auto* analyze = app.add_subcommand("analyze", "Run all analyses on built graphs and write reports");
    analyze_opts.attach(analyze);

    std::string plot_report, plot_kind, plot_out, plot_title;
    auto* plot = app.add_subcommand("plot", "Render a report CSV as SVG");
    plot->add_option("report", plot_report, "Report CSV")->required();
    plot->add_option("-k,--kind", plot_kind, "heatmap | strip | bar")->required();
    plot->add_option("-o,--output", plot_out, "Output SVG (default stdout)");
    plot->add_option("-t,--title", plot_title, "Chart title");

    std::string export_graph_path, export_format = "dot", export_out, export_dir;
    int export_k = 0;
    auto* exp = app.add_subcommand("export", "Export a graph CSV as DOT, GraphML or edge CSV");
    exp->add_option("graph", export_graph_path, "Graph CSV")->required();
    exp->add_option("-f,--format", export_format, "dot | graphml | csv");
    exp->add_option("--direction", export_dir, "Top-k direction: in | out");
    exp->add_option("-k,--top-k", export_k, "Restrict to the Top-k subgraph");
    exp->add_option("-o,--output", export_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ErrorCategory::Config);
    }

    try {
        if (*build) {
            const auto built = pipeline::cmd_build(build_opts.load());
            for (const auto& ds : built)
                std::cerr << ds.label << ": " << ds.graph.node_count() << " countries, " << ds.graph.edge_count()
                          << " edges\n";
        } else if (*analyze) {
            const auto cfg = analyze_opts.load();
            const auto res = pipeline::cmd_analyze(cfg);
            std::cerr << "wrote " << res.files.size() + 1 << " files to " << cfg.output_root().string() << '\n';
        } else if (*plot) {
            const auto kind = pipeline::parse_plot_kind(plot_kind);
            const auto svg = pipeline::cmd_plot(pipeline::read_file(plot_report), kind, plot_title);
            write_output(plot_out, svg);
        } else if (*exp) {
            const auto fmt = parse_export_format(export_format);
            std::optional<std::pair<Direction, int>> sub;
            if (export_k != 0 || !export_dir.empty()) {
                if (export_dir != "in" && export_dir != "out")
                    throw Error(ErrorCategory::Config, "--direction must be in or out when --top-k is given");
                if (export_k < 1) throw Error(ErrorCategory::Config, "--top-k must be >= 1");
                sub = std::make_pair(export_dir == "in" ? Direction::In : Direction::Out, export_k);
            }
            write_output(export_out, pipeline::cmd_export(pipeline::read_file(export_graph_path), fmt, sub));
        }
    } catch (const Error& e) {
        std::cerr << "error (" << category_name(e.category()) << "): " << e.what() << '\n';
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
