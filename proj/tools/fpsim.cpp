// fpsim: floor plan structural similarity toolkit.
//
// Thin subcommand wrappers over the library; no logic lives here that is not
// also reachable through the public API.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fpsim/analysis.hpp"
#include "fpsim/config.hpp"
#include "fpsim/extract.hpp"
#include "fpsim/ged.hpp"
#include "fpsim/iou.hpp"
#include "fpsim/pipeline.hpp"
#include "fpsim/png_io.hpp"
#include "fpsim/rank.hpp"
#include "fpsim/ssig.hpp"

namespace {

using namespace fpsim;

std::filesystem::path default_config_path(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("FPSIM_CONFIG")) return env;
    throw ConfigError("no config given: pass --config or set FPSIM_CONFIG");
}

Config load_config(const std::string& flag_value) {
    Config config = Config::load(default_config_path(flag_value));
    config.validate();
    return config;
}

RankOptions rank_options(const Config& config) {
    RankOptions options;
    options.ssig.gamma = config.gamma;
    options.ged_budget = config.ged_budget;
    options.beam_width = config.beam_width;
    options.workers = config.workers;
    return options;
}

ScoreCache load_cache(const Config& config) {
    return ScoreCache::load_csv(config.cache_dir / "scores.csv");
}

int cmd_ingest(const std::string& config_path) {
    Config config = load_config(config_path);
    Manifest manifest = ingest(config);
    std::cout << "accepted " << manifest.accepted.size() << ", rejected " << manifest.rejected.size()
              << "\n";
    for (const IngestRejection& r : manifest.rejected) {
        std::cout << "rejected " << r.id << ": " << r.reasons.front() << "\n";
    }
    return 0;
}

int cmd_extract(const std::string& config_path, const std::string& image_path,
                const std::string& out_path) {
    Config config = load_config(config_path);
    CategoryMap categories = CategoryMap::load(config.category_map);
    SemanticImage image = read_indexed_png(image_path);
    AccessGraph graph = extract_access_graph(image, categories, config.extraction_params());
    if (out_path.empty()) {
        std::cout << graph.to_json().dump(2) << "\n";
    } else {
        graph.save(out_path);
    }
    return 0;
}

int cmd_pairwise(const std::string& config_path) {
    Config config = load_config(config_path);
    CategoryMap categories = CategoryMap::load(config.category_map);
    Manifest manifest = Manifest::load(config.cache_dir / "manifest.json");
    std::vector<FloorPlan> corpus = load_corpus(config, manifest);

    std::filesystem::path cache_file = config.cache_dir / "scores.csv";
    ScoreCache cache;
    if (std::filesystem::exists(cache_file)) cache = ScoreCache::load_csv(cache_file);

    PairwiseOutcome outcome = pairwise_miou(corpus, categories, config.workers);
    std::vector<PairKey> fresh;
    for (const PairScore* score : outcome.cache.records()) {
        if (!cache.find(score->id_a, score->id_b)) {
            cache.upsert(*score);
            fresh.push_back({score->id_a, score->id_b});
        }
    }
    cache.append_csv(cache_file, fresh);
    std::cout << "pairs " << cache.size() << " (" << fresh.size() << " new, "
              << outcome.skipped.size() << " skipped)\n";
    for (const PairKey& key : outcome.skipped) {
        std::cout << "skipped " << key.a << "," << key.b << " (dimension mismatch)\n";
    }
    return 0;
}

int cmd_dedup(const std::string& config_path, double tau_flag) {
    Config config = load_config(config_path);
    if (tau_flag > 0.0) config.tau_dedup = tau_flag;
    Manifest manifest = Manifest::load(config.cache_dir / "manifest.json");
    ScoreCache cache = load_cache(config);
    std::vector<std::string> retained = dedup(manifest.accepted, cache, config.tau_dedup);
    std::ofstream out(config.cache_dir / "retained.txt");
    for (const std::string& id : retained) out << id << "\n";
    std::cout << "retained " << retained.size() << " of " << manifest.accepted.size() << "\n";
    return 0;
}

int cmd_rank(const std::string& config_path, int n_flag, double gamma_flag) {
    Config config = load_config(config_path);
    if (n_flag > 0) config.n = n_flag;
    if (gamma_flag > 0.0) config.gamma = gamma_flag;
    Manifest manifest = Manifest::load(config.cache_dir / "manifest.json");
    std::vector<FloorPlan> corpus = load_corpus(config, manifest);
    ScoreCache cache = load_cache(config);

    auto lists = prefilter_topn(cache, config.n);
    GedMemo memo;
    std::vector<RankedList> rankings = rank_ssig(lists, corpus, cache, rank_options(config), &memo);

    std::vector<PairKey> scored;
    ScoreCache persisted = ScoreCache::load_csv(config.cache_dir / "scores.csv");
    for (const PairScore* score : cache.records()) {
        const PairScore* old = persisted.find(score->id_a, score->id_b);
        if (score->nged && (!old || !old->nged)) scored.push_back({score->id_a, score->id_b});
    }
    cache.append_csv(config.cache_dir / "scores.csv", scored);

    std::filesystem::create_directories(config.cache_dir / "rankings");
    for (const RankedList& ranking : rankings) {
        std::ofstream out(config.cache_dir / "rankings" / (ranking.query_id + ".json"));
        out << ranking.to_json().dump(2) << "\n";
    }
    std::cout << "ranked " << rankings.size() << " identities (n=" << config.n
              << ", gamma=" << config.gamma << ")\n";
    return 0;
}

int cmd_query(const std::string& config_path, const std::string& target, int top_k) {
    Config config = load_config(config_path);
    CategoryMap categories = CategoryMap::load(config.category_map);
    Manifest manifest = Manifest::load(config.cache_dir / "manifest.json");
    std::vector<FloorPlan> corpus = load_corpus(config, manifest);

    FloorPlan query;
    if (target.size() > 4 && target.substr(target.size() - 4) == ".png") {
        query.id = std::filesystem::path(target).stem().string();
        query.image = read_indexed_png(target);
        query.graph = extract_access_graph(query.image, categories, config.extraction_params());
    } else {
        bool found = false;
        for (const FloorPlan& plan : corpus) {
            if (plan.id == target) {
                query = plan;
                found = true;
                break;
            }
        }
        if (!found) throw Error("query id not in corpus: " + target);
    }

    RankedList ranked = query_plan(query, corpus, categories, config.n, top_k, rank_options(config));
    std::cout << ranked.to_json().dump(2) << "\n";
    return 0;
}

int cmd_stats(const std::string& config_path, const std::string& out_dir) {
    Config config = load_config(config_path);
    Manifest manifest = Manifest::load(config.cache_dir / "manifest.json");
    std::vector<FloorPlan> corpus = load_corpus(config, manifest);
    ScoreCache cache = load_cache(config);
    StatsOptions options;
    std::filesystem::path out = out_dir.empty() ? config.cache_dir / "stats" : std::filesystem::path(out_dir);
    write_stats(out, corpus, cache, config, options);
    std::cout << "stats written to " << out.string() << "\n";
    return 0;
}

int cmd_calibrate_gamma(const std::string& pairs_path, const std::string& grid_text) {
    ScoreCache cache = ScoreCache::load_csv(pairs_path);
    std::vector<double> miou_vals;
    std::vector<double> nged_vals;
    for (const PairScore* score : cache.records()) {
        if (score->miou) miou_vals.push_back(*score->miou);
        if (score->nged) nged_vals.push_back(*score->nged);
    }
    GammaCalibration result =
        calibrate_gamma(miou_vals, nged_vals, GammaGrid::parse(grid_text));
    std::cout << "gamma_star " << result.gamma_star << "\n";
    std::cout << "overlap " << result.overlap << "\n";
    return 0;
}

int cmd_ged(const std::string& a_path, const std::string& b_path, int beam, int budget) {
    AccessGraph a = AccessGraph::load(a_path);
    AccessGraph b = AccessGraph::load(b_path);
    GedResult result;
    bool approx = std::max(a.order(), b.order()) > budget;
    if (beam > 0) {
        result = ged_beam(a, b, beam);
        approx = true;
    } else if (approx) {
        result = ged_beam(a, b, 64);
    } else {
        result = ged_exact(a, b, budget);
    }
    std::cout << "cost " << result.cost << (approx ? " (approximate)" : "") << "\n";
    if (a.order() >= 1 && b.order() >= 1) {
        std::cout << "nged " << nged(result.cost, a.order(), b.order()) << "\n";
    }
    for (const EditOp& op : result.path.ops) {
        std::cout << op.describe() << "\n";
    }
    return 0;
}

int cmd_run(const std::string& config_path) {
    Config config = load_config(config_path);
    int status = run_pipeline(config);
    if (status == 0) {
        std::cout << "pipeline complete; outputs under " << config.cache_dir.string() << "\n";
    } else {
        std::ifstream err(config.cache_dir / "error.json");
        std::string line;
        while (std::getline(err, line)) std::cerr << line << "\n";
    }
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"floor plan structural similarity toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "config file (or set FPSIM_CONFIG)");

    auto* ingest_cmd = app.add_subcommand("ingest", "load dataset, extract graphs, write manifest");

    auto* extract_cmd = app.add_subcommand("extract", "extract the access graph of one image");
    std::string extract_image;
    std::string extract_out;
    extract_cmd->add_option("image", extract_image, "semantic image (8-bit indexed PNG)")->required();
    extract_cmd->add_option("--out", extract_out, "output JSON path (stdout when omitted)");

    auto* pairwise_cmd = app.add_subcommand("pairwise", "mIoU for every corpus pair");

    auto* dedup_cmd = app.add_subcommand("dedup", "drop near-duplicates by mIoU threshold");
    double tau_flag = -1.0;
    dedup_cmd->add_option("--tau", tau_flag, "mIoU duplicate threshold");

    auto* rank_cmd = app.add_subcommand("rank", "prefilter on mIoU, re-rank on ssig");
    int n_flag = -1;
    double gamma_flag = -1.0;
    rank_cmd->add_option("--n", n_flag, "prefilter size");
    rank_cmd->add_option("--gamma", gamma_flag, "ssig gamma");

    auto* query_cmd = app.add_subcommand("query", "rank one id or unseen image against the corpus");
    std::string query_target;
    int top_k = 10;
    query_cmd->add_option("target", query_target, "corpus id or path to a .png")->required();
    query_cmd->add_option("--top", top_k, "entries to keep");

    auto* stats_cmd = app.add_subcommand("stats", "distribution and correlation statistics");
    std::string stats_out;
    stats_cmd->add_option("--out", stats_out, "output directory (default <cache_dir>/stats)");

    auto* calibrate_cmd = app.add_subcommand("calibrate-gamma", "balance miou/nged distributions");
    std::string pairs_path;
    std::string grid_text = "0.1:1.0:0.05";
    calibrate_cmd->add_option("--pairs", pairs_path, "score cache CSV")->required();
    calibrate_cmd->add_option("--grid", grid_text, "gamma grid lo:hi:step");

    auto* ged_cmd = app.add_subcommand("ged", "edit distance between two graph JSON files");
    std::string ged_a;
    std::string ged_b;
    int beam = 0;
    int budget = kDefaultGedBudget;
    ged_cmd->add_option("a", ged_a, "first graph JSON")->required();
    ged_cmd->add_option("b", ged_b, "second graph JSON")->required();
    ged_cmd->add_option("--beam", beam, "force beam search with this width");
    ged_cmd->add_option("--budget", budget, "exact-search node budget");

    auto* run_cmd = app.add_subcommand("run", "full pipeline with stage skipping");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest_cmd) return cmd_ingest(config_path);
        if (*extract_cmd) return cmd_extract(config_path, extract_image, extract_out);
        if (*pairwise_cmd) return cmd_pairwise(config_path);
        if (*dedup_cmd) return cmd_dedup(config_path, tau_flag);
        if (*rank_cmd) return cmd_rank(config_path, n_flag, gamma_flag);
        if (*query_cmd) return cmd_query(config_path, query_target, top_k);
        if (*stats_cmd) return cmd_stats(config_path, stats_out);
        if (*calibrate_cmd) return cmd_calibrate_gamma(pairs_path, grid_text);
        if (*ged_cmd) return cmd_ged(ged_a, ged_b, beam, budget);
        if (*run_cmd) return cmd_run(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
