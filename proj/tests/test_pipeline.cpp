#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "fixtures.hpp"
#include "mobgraph/pipeline.hpp"

using namespace mobgraph;
namespace fs = std::filesystem;

namespace {

pipeline::RunConfig small_config(const fs::path& dir, bool two) {
    const auto countries = fixture::real_countries(14);
    fixture::write_text(dir / "a.csv", fixture::flow_csv(fixture::flow_arcs(countries, 0.2, 1)));
    fixture::write_text(dir / "b.csv", fixture::flow_csv(fixture::flow_arcs(countries, 0.2, 2)));
    std::string cfg =
        "# test run\n"
        "a.label = social\n"
        "a.flows = a.csv\n"
        "k = 1,2\n"
        "ensemble.size = 12\n"
        "ensemble.swaps_per_edge = 5\n"
        "n_clusters = 4\n"
        "seed = 7\n"
        "output_dir = out\n";
    if (two) cfg += "b.label = official\nb.flows = b.csv\n";
    fixture::write_text(dir / "run.cfg", cfg);
    return pipeline::load_config(dir / "run.cfg");
}

std::map<std::string, std::string> bundle_bytes(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = fixture::read_text(e.path());
    return out;
}

}  // namespace

TEST(Config, ParsesDefaultsOverridesAndErrors) {
    std::istringstream in("# c\n k = 3 \nseed=5\n\n");
    const auto kv = pipeline::parse_key_values(in);
    EXPECT_EQ(kv.at("k"), "3");
    auto c = pipeline::config_from(kv);
    EXPECT_EQ(c.ks, std::vector<int>{3});
    EXPECT_EQ(c.seed, 5u);
    EXPECT_EQ(c.checkin_threshold, 1000u);
    EXPECT_EQ(c.ensemble_size, 1000u);
    EXPECT_EQ(c.swaps_per_edge, 100u);
    EXPECT_EQ(c.pagerank.damping, 0.85);
    EXPECT_THROW(pipeline::config_from({{"bogus", "1"}}), Error);
    EXPECT_THROW(pipeline::config_from({{"k", "0"}}), Error);
    EXPECT_THROW(pipeline::config_from({{"seed", "x"}}), Error);
    EXPECT_THROW(pipeline::config_from({{"a.label", "x"}, {"b.label", "x"}}), Error);
    std::istringstream bad("novalue\n");
    EXPECT_THROW(pipeline::parse_key_values(bad), ParseError);
}

TEST(Config, FlagsWinAndHashIgnoresOutputLocation) {
    const auto dir = fixture::temp_dir("cfg");
    fixture::write_text(dir / "run.cfg", "seed = 1\noutput_dir = x\n");
    const auto base = pipeline::load_config(dir / "run.cfg");
    const auto over = pipeline::load_config(dir / "run.cfg", {{"seed", "2"}});
    EXPECT_EQ(over.seed, 2u);
    EXPECT_NE(base.hash(), over.hash());
    const auto moved = pipeline::load_config(dir / "run.cfg", {{"output_dir", "elsewhere"}, {"threads", "3"}});
    EXPECT_EQ(base.hash(), moved.hash());
    EXPECT_EQ(base.output_root(), dir / "x");
}

TEST(Build, CheckinFixtureRoundTrips) {
    const auto dir = fixture::temp_dir("build");
    const auto countries = fixture::real_countries(12);
    fixture::write_text(dir / "log.csv", fixture::checkin_csv(countries, 400, 3));
    fixture::write_text(dir / "run.cfg", "a.label = lbsn\na.checkins = log.csv\ncheckin_threshold = 20\n");
    const auto cfg = pipeline::load_config(dir / "run.cfg");
    const auto built = pipeline::cmd_build(cfg);
    ASSERT_EQ(built.size(), 1u);
    std::ifstream in(cfg.output_root() / "lbsn/graph.csv");
    EXPECT_EQ(parse_flow_matrix(in), built[0].graph);
    const auto first = fixture::read_text(cfg.output_root() / "lbsn/graph.csv");
    EXPECT_EQ(first.rfind("# tool=mobgraph", 0), 0u);
    const auto manifest = nlohmann::json::parse(fixture::read_text(cfg.output_root() / "lbsn/build_manifest.json"));
    EXPECT_GT(manifest["records"].get<int>(), 400);
    EXPECT_EQ(manifest["checkin_threshold"], 20);
    EXPECT_EQ(manifest["meta"]["seed"], 0);

    pipeline::cmd_build(cfg);
    EXPECT_EQ(fixture::read_text(cfg.output_root() / "lbsn/graph.csv"), first);
}

TEST(Build, ExactlyOneSourcePerDataset) {
    const auto dir = fixture::temp_dir("sources");
    fixture::write_text(dir / "a.csv", "origin,destination,count\nFR,ES,1\n");
    fixture::write_text(dir / "log.csv", "user_id,country,timestamp\n");
    fixture::write_text(dir / "run.cfg", "a.flows = a.csv\na.checkins = log.csv\n");
    try {
        pipeline::cmd_build(pipeline::load_config(dir / "run.cfg"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Config);
    }
    fixture::write_text(dir / "none.cfg", "seed = 1\n");
    EXPECT_THROW(pipeline::cmd_build(pipeline::load_config(dir / "none.cfg")), Error);
}

TEST(Build, IngestErrorsCarryFileAndRow) {
    const auto dir = fixture::temp_dir("ingesterr");
    fixture::write_text(dir / "a.csv", "origin,destination,count\nFR,ES,1\nFR,FR,2\n");
    fixture::write_text(dir / "run.cfg", "a.flows = a.csv\n");
    try {
        pipeline::cmd_build(pipeline::load_config(dir / "run.cfg"));
        FAIL();
    } catch (const Error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("[ingest]"), std::string::npos);
        EXPECT_NE(msg.find("a.csv"), std::string::npos);
        EXPECT_NE(msg.find("line 3"), std::string::npos);
    }
}

TEST(Analyze, SingleDatasetHasNoComparison) {
    const auto dir = fixture::temp_dir("single");
    const auto cfg = small_config(dir, false);
    pipeline::cmd_build(cfg);
    const auto res = pipeline::cmd_analyze(cfg);
    const auto root = cfg.output_root();
    EXPECT_FALSE(fs::exists(root / "compare"));
    EXPECT_FALSE(res.correlation.has_value());
    for (const char* tag : {"top1_in", "top1_out", "top2_in", "top2_out"})
        for (const char* f : {"structural.json", "structural.csv", "centrality_pagerank.csv", "centrality_betweenness.csv",
                              "scc.csv", "distance.csv", "clusters.csv", "triad_census.csv", "motif_z.csv",
                              "regional_raw.csv", "regional_share.csv"})
            EXPECT_TRUE(fs::exists(root / "social" / tag / f)) << tag << "/" << f;
    EXPECT_FALSE(fs::exists(root / "social/top3_in"));
    const auto manifest = nlohmann::json::parse(fixture::read_text(root / "manifest.json"));
    EXPECT_EQ(manifest["files"].size(), res.files.size());
    for (const auto& f : manifest["files"]) {
        const auto bytes = fixture::read_text(root / f["path"].get<std::string>());
        EXPECT_EQ(f["fnv1a64"], util::hex64(util::fnv1a64(bytes)));
    }
}

TEST(Analyze, BundleMatchesDirectModuleCalls) {
    const auto dir = fixture::temp_dir("direct");
    const auto cfg = small_config(dir, true);
    pipeline::cmd_build(cfg);
    pipeline::cmd_analyze(cfg);
    const auto root = cfg.output_root();
    std::ifstream in(root / "social/graph.csv");
    const auto g = parse_flow_matrix(in, "social");
    const auto meta = cfg.meta();
    const auto sg = topk_out(g, 2);

    std::ostringstream census, z, share, structural, clusters;
    report::write_census_csv(census, triad_census(sg.graph()), meta);
    EXPECT_EQ(census.str(), fixture::read_text(root / "social/top2_out/triad_census.csv"));
    const auto zs = motif_zscores(sg.graph(), {12, util::derive_seed(7, "census/top2_out"), 5, 1});
    report::write_zscores_csv(z, zs, meta);
    EXPECT_EQ(z.str(), fixture::read_text(root / "social/top2_out/motif_z.csv"));
    report::write_regional_csv(share, to_shares(regional_flows(sg, default_region_map())), meta);
    EXPECT_EQ(share.str(), fixture::read_text(root / "social/top2_out/regional_share.csv"));
    report::write_structural_csv(structural, structural_report(sg), meta);
    EXPECT_EQ(structural.str(), fixture::read_text(root / "social/top2_out/structural.csv"));
    report::write_clusters_csv(clusters, filter_singletons(average_linkage(distance_matrix(sg), 4)), meta);
    EXPECT_EQ(clusters.str(), fixture::read_text(root / "social/top2_out/clusters.csv"));
    for (const char* f : {"compare/top1_in/z_diff.csv", "compare/top2_out/share_diff.csv",
                          "compare/share_diff_summary.json", "compare/correlation.csv"})
        EXPECT_TRUE(fs::exists(root / f)) << f;
}

TEST(Analyze, IdenticalDatasetsCompareAsIdentity) {
    const auto dir = fixture::temp_dir("identity");
    auto cfg = small_config(dir, true);
    cfg.datasets[1].flows = "a.csv";
    pipeline::cmd_build(cfg);
    const auto res = pipeline::cmd_analyze(cfg);
    ASSERT_TRUE(res.correlation.has_value());
    std::size_t defined = 0;
    for (const auto& e : res.correlation->entries)
        if (e.defined) {
            ++defined;
            EXPECT_NEAR(e.rho, 1.0, 1e-12);
        }
    EXPECT_GT(defined, 0u);
    const auto zdiff = fixture::read_text(cfg.output_root() / "compare/top2_in/z_diff.csv");
    std::istringstream lines(zdiff);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("class", 0) == 0) continue;
        EXPECT_TRUE(std::regex_match(line, std::regex("[0-9A-Z]+,(0,ok|nan,undefined)"))) << line;
    }
}

TEST(Analyze, RepeatedRunsAreByteIdentical) {
    const auto dir = fixture::temp_dir("repeat");
    auto cfg = small_config(dir, true);
    pipeline::cmd_build(cfg);
    pipeline::cmd_analyze(cfg);
    const auto first = bundle_bytes(cfg.output_root());
    cfg.threads = 3;
    pipeline::cmd_analyze(cfg);
    EXPECT_EQ(bundle_bytes(cfg.output_root()), first);
}

TEST(Analyze, MissingGraphAndModuleErrors) {
    const auto dir = fixture::temp_dir("missing");
    auto cfg = small_config(dir, false);
    cfg.n_clusters = 2;
    EXPECT_THROW(pipeline::cmd_analyze(cfg), Error);
    // A country outside the region map aborts in the regional module.
    fixture::write_text(dir / "a.csv", "origin,destination,count\nFR,ES,3\nES,QQ,2\nQQ,FR,1\n");
    pipeline::cmd_build(cfg);
    try {
        pipeline::cmd_analyze(cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("[regional]"), std::string::npos);
        EXPECT_EQ(e.category(), ErrorCategory::Domain);
    }
}

TEST(Plot, HeatmapStripBarAndMismatch) {
    const auto dir = fixture::temp_dir("plot");
    const auto cfg = small_config(dir, true);
    pipeline::cmd_build(cfg);
    pipeline::cmd_analyze(cfg);
    const auto root = cfg.output_root();

    const auto diff = fixture::read_text(root / "compare/top2_in/share_diff.csv");
    const auto svg = pipeline::cmd_plot(diff, pipeline::PlotKind::Heatmap);
    std::size_t cells = 0;
    for (auto p = svg.find("class=\"cell\""); p != std::string::npos; p = svg.find("class=\"cell\"", p + 1)) ++cells;
    EXPECT_EQ(cells, 36u);
    EXPECT_EQ(svg, pipeline::cmd_plot(diff, pipeline::PlotKind::Heatmap));

    const auto corr = fixture::read_text(root / "compare/correlation.csv");
    const auto strip = pipeline::cmd_plot(corr, pipeline::PlotKind::Strip);
    std::size_t marks = 0, ok_rows = 0;
    for (auto p = strip.find("class=\"mark\""); p != std::string::npos; p = strip.find("class=\"mark\"", p + 1)) ++marks;
    for (auto p = corr.find(",ok\n"); p != std::string::npos; p = corr.find(",ok\n", p + 1)) ++ok_rows;
    EXPECT_EQ(marks, ok_rows);
    EXPECT_EQ(strip, pipeline::cmd_plot(corr, pipeline::PlotKind::Strip));

    const auto bar = pipeline::cmd_plot(fixture::read_text(root / "social/top1_in/motif_z.csv"), pipeline::PlotKind::Bar);
    EXPECT_NE(bar.find("<svg"), std::string::npos);

    EXPECT_THROW(pipeline::cmd_plot(corr, pipeline::PlotKind::Heatmap), Error);
    EXPECT_THROW(pipeline::cmd_plot(diff, pipeline::PlotKind::Strip), Error);
    EXPECT_THROW(pipeline::parse_plot_kind("pie"), Error);
}

TEST(Export, TopKSubgraphFromGraphCsv) {
    const std::string csv = "origin,destination,count\nFR,ES,10\nDE,ES,4\nES,FR,2\n";
    const auto dot = pipeline::cmd_export(csv, ExportFormat::Dot, std::make_pair(Direction::In, 1));
    EXPECT_NE(dot.find("\"FR\" -> \"ES\""), std::string::npos);
    EXPECT_EQ(dot.find("\"DE\" -> \"ES\""), std::string::npos);
}
