#include "fpsim/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

#include "fpsim/analysis.hpp"
#include "fpsim/extract.hpp"
#include "fpsim/iou.hpp"
#include "fpsim/png_io.hpp"
#include "fpsim/util.hpp"

namespace fpsim {

nlohmann::json Manifest::to_json() const {
    nlohmann::json rejected_json = nlohmann::json::array();
    for (const IngestRejection& r : rejected) {
        rejected_json.push_back({{"id", r.id}, {"reasons", r.reasons}});
    }
    return nlohmann::json{{"accepted", accepted}, {"rejected", rejected_json}};
}

Manifest Manifest::from_json(const nlohmann::json& doc) {
    Manifest m;
    m.accepted = doc.at("accepted").get<std::vector<std::string>>();
    for (const auto& item : doc.at("rejected")) {
        IngestRejection r;
        r.id = item.at("id").get<std::string>();
        r.reasons = item.at("reasons").get<std::vector<std::string>>();
        m.rejected.push_back(std::move(r));
    }
    return m;
}

Manifest Manifest::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open manifest: " + file.string());
    nlohmann::json doc;
    in >> doc;
    return from_json(doc);
}

void Manifest::save(const std::filesystem::path& file) const {
    std::ofstream out(file);
    if (!out) throw Error("cannot write manifest: " + file.string());
    out << to_json().dump(2) << "\n";
}

Manifest ingest(const Config& config) {
    CategoryMap categories = CategoryMap::load(config.category_map);
    std::filesystem::create_directories(config.cache_dir / "graphs");

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(config.dataset_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    Manifest manifest;
    for (const std::filesystem::path& file : files) {
        std::string id = file.stem().string();
        try {
            SemanticImage image = read_indexed_png(file);
            for (CategoryCode code : image.labels) {
                if (!categories.contains(code)) {
                    throw UnknownLabel("label " + std::to_string(int(code)) +
                                       " not present in category map");
                }
            }
            AccessGraph graph = extract_access_graph(image, categories, config.extraction_params());
            FloorPlan plan{id, std::move(image), std::move(graph)};
            std::vector<std::string> report = validate_floor_plan(plan, categories);
            if (report.empty()) {
                plan.graph.save(config.cache_dir / "graphs" / (id + ".json"));
                manifest.accepted.push_back(id);
            } else {
                manifest.rejected.push_back({id, std::move(report)});
            }
        } catch (const Error& e) {
            manifest.rejected.push_back({id, {e.what()}});
        }
    }
    std::sort(manifest.accepted.begin(), manifest.accepted.end());
    std::sort(manifest.rejected.begin(), manifest.rejected.end(),
              [](const IngestRejection& l, const IngestRejection& r) { return l.id < r.id; });
    manifest.save(config.cache_dir / "manifest.json");
    return manifest;
}

std::vector<FloorPlan> load_corpus(const Config& config, const Manifest& manifest) {
    std::vector<FloorPlan> corpus(manifest.accepted.size());
    parallel_for(manifest.accepted.size(), config.workers, [&](std::size_t i) {
        const std::string& id = manifest.accepted[i];
        corpus[i].id = id;
        corpus[i].image = read_indexed_png(config.dataset_dir / (id + ".png"));
        corpus[i].graph = AccessGraph::load(config.cache_dir / "graphs" / (id + ".json"));
    });
    return corpus;
}

namespace {

void write_histogram_csv(const std::filesystem::path& file, const Histogram& hist) {
    std::ofstream out(file);
    if (!out) throw Error("cannot write " + file.string());
    out << "bin_lo,bin_hi,density\n";
    double width = (hist.hi - hist.lo) / hist.bins;
    for (int b = 0; b < hist.bins; ++b) {
        out << format_double(hist.lo + b * width) << "," << format_double(hist.lo + (b + 1) * width)
            << "," << format_double(hist.density[b]) << "\n";
    }
}

// Makes sure up to `budget` pairs carry a nged, sampling uniformly (seeded)
// when the cache is larger than the budget, so the distribution statistics
// do not depend on which pairs the ranking stage happened to score.
void ensure_ged_sample(ScoreCache& cache, std::span<const FloorPlan> corpus, const Config& config,
                       std::int64_t budget) {
    std::vector<const PairScore*> records = cache.records();
    std::vector<PairKey> missing;
    std::int64_t have = 0;
    for (const PairScore* r : records) {
        if (r->nged) ++have;
        else if (r->miou) missing.push_back({r->id_a, r->id_b});
    }
    std::int64_t want = std::min<std::int64_t>(budget - have, static_cast<std::int64_t>(missing.size()));
    if (want <= 0) return;
    if (want < static_cast<std::int64_t>(missing.size())) {
        std::mt19937_64 rng(config.seed);
        std::shuffle(missing.begin(), missing.end(), rng);
        missing.resize(static_cast<std::size_t>(want));
        std::sort(missing.begin(), missing.end());
    }
    RankOptions options;
    options.ssig.gamma = config.gamma;
    options.ged_budget = config.ged_budget;
    options.beam_width = config.beam_width;
    options.workers = config.workers;
    GedMemo memo;
    score_pairs_ssig(cache, corpus, missing, options, memo);
}

} // namespace

void write_stats(const std::filesystem::path& out_dir, std::span<const FloorPlan> corpus,
                 ScoreCache& cache, const Config& config, const StatsOptions& options) {
    std::filesystem::create_directories(out_dir);

    ensure_ged_sample(cache, corpus, config, options.ged_sample_budget);

    std::vector<double> miou_vals;
    std::vector<double> nged_vals;
    for (const PairScore* r : cache.records()) {
        if (r->miou) miou_vals.push_back(*r->miou);
        if (r->nged) nged_vals.push_back(*r->nged);
    }
    write_histogram_csv(out_dir / "iou_hist.csv", histogram(miou_vals, options.hist_bins, 0.0, 1.0));
    write_histogram_csv(out_dir / "ged_hist.csv", histogram(nged_vals, options.hist_bins, 0.0, 1.0));

    CensusResult census = base_graph_census(corpus, true);
    {
        std::ofstream out(out_dir / "census.csv");
        if (!out) throw Error("cannot write census.csv");
        out << "key,count\n";
        for (const CensusEntry& e : census.groups) {
            out << "\"" << e.key << "\"," << e.count << "\n";
        }
    }

    DensityMap density = density_map_2d(cache, options.hist_bins, options.hist_bins);
    {
        std::ofstream out(out_dir / "density.csv");
        if (!out) throw Error("cannot write density.csv");
        out << "miou_bin,nged_bin,mass\n";
        for (int y = 0; y < density.bins_y; ++y) {
            for (int x = 0; x < density.bins_x; ++x) {
                double mass = density.at(x, y);
                if (mass == 0.0) continue;
                out << x << "," << y << "," << format_double(mass) << "\n";
            }
        }
    }

    nlohmann::json summary;
    summary["pearson_r"] = correlation_iou_ged(cache);
    summary["opposition_rate"] = opposition_rate(cache, options.sample_count, config.seed);
    summary["sample_seed"] = config.seed;
    summary["sample_count"] = options.sample_count;
    {
        std::ofstream out(out_dir / "summary.json");
        if (!out) throw Error("cannot write summary.json");
        out << summary.dump(2) << "\n";
    }
}

namespace {

struct StageState {
    nlohmann::json hashes = nlohmann::json::object();
    std::filesystem::path file;

    static StageState load(const std::filesystem::path& file) {
        StageState s;
        s.file = file;
        if (std::filesystem::exists(file)) {
            std::ifstream in(file);
            in >> s.hashes;
        }
        return s;
    }
    bool current(const std::string& stage, const std::string& hash) const {
        return hashes.contains(stage) && hashes[stage] == hash;
    }
    void record(const std::string& stage, const std::string& hash) {
        hashes[stage] = hash;
        std::ofstream out(file);
        out << hashes.dump(2) << "\n";
    }
};

std::string dataset_fingerprint(const Config& config) {
    Fnv1a hash;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(config.dataset_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        hash.update(file.filename().string());
        hash.update_file(file);
    }
    hash.update_file(config.category_map);
    hash.update(static_cast<std::uint64_t>(config.door_reach));
    hash.update(static_cast<std::uint64_t>(config.adjacency_gap));
    hash.update(static_cast<std::uint64_t>(config.min_room_area));
    return hash.hex();
}

} // namespace

int run_pipeline(const Config& config) {
    std::filesystem::create_directories(config.cache_dir);
    std::filesystem::path error_file = config.cache_dir / "error.json";
    std::string stage = "setup";
    try {
        StageState state = StageState::load(config.cache_dir / "stage_state.json");
        std::filesystem::path cache_file = config.cache_dir / "scores.csv";
        CategoryMap categories = CategoryMap::load(config.category_map);

        // Every stage is a deterministic function of the dataset and its
        // parameters, so stage hashes chain: a stage re-runs iff its own
        // parameters or anything upstream changed.
        stage = "ingest";
        std::string ingest_hash = dataset_fingerprint(config);
        if (!state.current(stage, ingest_hash) ||
            !std::filesystem::exists(config.cache_dir / "manifest.json")) {
            ingest(config);
            state.record(stage, ingest_hash);
        }
        Manifest manifest = Manifest::load(config.cache_dir / "manifest.json");
        std::vector<FloorPlan> corpus = load_corpus(config, manifest);

        stage = "pairwise";
        std::string pairwise_hash = ingest_hash;
        if (!state.current(stage, pairwise_hash) || !std::filesystem::exists(cache_file)) {
            ScoreCache cache;
            if (std::filesystem::exists(cache_file)) {
                cache = ScoreCache::load_csv(cache_file); // resume: keep prior rows
            }
            PairwiseOutcome outcome = pairwise_miou(corpus, categories, config.workers);
            std::vector<PairKey> fresh;
            for (const PairScore* score : outcome.cache.records()) {
                if (!cache.find(score->id_a, score->id_b)) {
                    cache.upsert(*score);
                    fresh.push_back({score->id_a, score->id_b});
                }
            }
            cache.append_csv(cache_file, fresh);
            if (!outcome.skipped.empty()) {
                std::ofstream out(config.cache_dir / "skipped_pairs.txt");
                for (const PairKey& key : outcome.skipped) out << key.a << "," << key.b << "\n";
            }
            state.record(stage, pairwise_hash);
        }
        ScoreCache cache = ScoreCache::load_csv(cache_file);

        stage = "dedup";
        std::string dedup_hash;
        {
            Fnv1a h;
            h.update(pairwise_hash);
            h.update(format_double(config.tau_dedup));
            dedup_hash = h.hex();
        }
        if (!state.current(stage, dedup_hash) ||
            !std::filesystem::exists(config.cache_dir / "retained.txt")) {
            std::vector<std::string> retained = dedup(manifest.accepted, cache, config.tau_dedup);
            std::ofstream out(config.cache_dir / "retained.txt");
            for (const std::string& id : retained) out << id << "\n";
            state.record(stage, dedup_hash);
        }
        std::vector<std::string> retained;
        {
            std::ifstream in(config.cache_dir / "retained.txt");
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty()) retained.push_back(line);
            }
        }

        stage = "rank";
        std::string rank_hash;
        {
            Fnv1a h;
            h.update(dedup_hash);
            h.update(static_cast<std::uint64_t>(config.n));
            h.update(format_double(config.gamma));
            h.update(static_cast<std::uint64_t>(config.ged_budget));
            h.update(static_cast<std::uint64_t>(config.beam_width));
            rank_hash = h.hex();
        }
        if (!state.current(stage, rank_hash) ||
            !std::filesystem::exists(config.cache_dir / "rankings")) {
            std::set<std::string> retained_set(retained.begin(), retained.end());
            std::vector<FloorPlan> ranked_corpus;
            for (const FloorPlan& plan : corpus) {
                if (retained_set.count(plan.id)) ranked_corpus.push_back(plan);
            }
            // candidate lists over retained ids only
            ScoreCache retained_cache;
            for (const PairScore* score : cache.records()) {
                if (retained_set.count(score->id_a) && retained_set.count(score->id_b)) {
                    retained_cache.upsert(*score);
                }
            }
            auto lists = prefilter_topn(retained_cache, config.n);
            RankOptions options;
            options.ssig.gamma = config.gamma;
            options.ged_budget = config.ged_budget;
            options.beam_width = config.beam_width;
            options.workers = config.workers;
            GedMemo memo;
            std::vector<RankedList> rankings =
                rank_ssig(lists, ranked_corpus, retained_cache, options, &memo);

            // merge the scored fields back into the full cache and persist
            std::vector<PairKey> scored;
            for (const PairScore* score : retained_cache.records()) {
                const PairScore* old = cache.find(score->id_a, score->id_b);
                if (score->nged && (!old || !old->nged)) {
                    cache.upsert(*score);
                    scored.push_back({score->id_a, score->id_b});
                }
            }
            cache.append_csv(cache_file, scored);

            std::filesystem::create_directories(config.cache_dir / "rankings");
            for (const RankedList& ranking : rankings) {
                std::ofstream out(config.cache_dir / "rankings" / (ranking.query_id + ".json"));
                out << ranking.to_json().dump(2) << "\n";
            }
            state.record(stage, rank_hash);
        }

        stage = "stats";
        StatsOptions stats_options;
        std::string stats_hash;
        {
            Fnv1a h;
            h.update(rank_hash);
            h.update(config.seed);
            h.update(static_cast<std::uint64_t>(stats_options.sample_count));
            h.update(static_cast<std::uint64_t>(stats_options.ged_sample_budget));
            stats_hash = h.hex();
        }
        if (!state.current(stage, stats_hash) ||
            !std::filesystem::exists(config.cache_dir / "stats" / "summary.json")) {
            cache = ScoreCache::load_csv(cache_file);
            ScoreCache persisted = cache;
            write_stats(config.cache_dir / "stats", corpus, cache, config, stats_options);
            // pairs scored by the stats sampler are appended as well
            std::vector<PairKey> fresh;
            for (const PairScore* score : cache.records()) {
                const PairScore* old = persisted.find(score->id_a, score->id_b);
                if (score->nged && (!old || !old->nged)) {
                    fresh.push_back({score->id_a, score->id_b});
                }
            }
            cache.append_csv(cache_file, fresh);
            state.record(stage, stats_hash);
        }

        std::filesystem::remove(error_file);
        return 0;
    } catch (const std::exception& e) {
        nlohmann::json error{{"stage", stage}, {"error", e.what()}};
        std::ofstream out(error_file);
        out << error.dump(2) << "\n";
        return 1;
    }
}

} // namespace fpsim
