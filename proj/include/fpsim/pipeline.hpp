#ifndef FPSIM_PIPELINE_HPP
#define FPSIM_PIPELINE_HPP

#include <string>
#include <vector>

#include "fpsim/config.hpp"
#include "fpsim/core.hpp"
#include "fpsim/rank.hpp"

namespace fpsim {

struct IngestRejection {
    std::string id;
    std::vector<std::string> reasons;
};

struct Manifest {
    std::vector<std::string> accepted; // sorted ids
    std::vector<IngestRejection> rejected;

    nlohmann::json to_json() const;
    static Manifest from_json(const nlohmann::json& doc);
    static Manifest load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;
};

/// Loads every PNG under dataset_dir, extracts its access graph, runs the
/// cleaning rules and writes graphs plus the manifest under cache_dir.
/// Unreadable images and unknown labels become rejections, not aborts.
/// Idempotent: a re-run reproduces the same manifest byte for byte.
Manifest ingest(const Config& config);

/// Reads back accepted plans (image + extracted graph) for the manifest ids.
std::vector<FloorPlan> load_corpus(const Config& config, const Manifest& manifest);

struct StatsOptions {
    std::int64_t sample_count = 1'000'000;
    /// Upper bound on pairs given a nged for distribution statistics; small
    /// corpora get full enumeration.
    std::int64_t ged_sample_budget = 1'000'000;
    int hist_bins = 100;
};

/// Writes iou_hist.csv, ged_hist.csv, census.csv, density.csv and
/// summary.json into out_dir.
void write_stats(const std::filesystem::path& out_dir, std::span<const FloorPlan> corpus,
                 ScoreCache& cache, const Config& config, const StatsOptions& options);

/// Full run: ingest -> pairwise -> dedup -> rank -> stats, with content-hash
/// stage skipping. Returns 0 on success; failures land in
/// cache_dir/error.json and a nonzero status.
int run_pipeline(const Config& config);

} // namespace fpsim

#endif
