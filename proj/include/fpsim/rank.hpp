#ifndef FPSIM_RANK_HPP
#define FPSIM_RANK_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fpsim/core.hpp"
#include "fpsim/ged.hpp"
#include "fpsim/ssig.hpp"

namespace fpsim {

inline constexpr char kScoreCacheHeader[] = "id_a,id_b,miou,ged,nged,ssig,approx";

/// In-memory view of the score cache. Persists as an append-only CSV; on
/// load, later rows for the same pair override earlier ones field-wise, so
/// stages can append refined records without rewriting the file.
class ScoreCache {
public:
    void upsert(const PairScore& score);
    const PairScore* find(std::string_view id1, std::string_view id2) const;
    std::size_t size() const { return records_.size(); }
    std::vector<const PairScore*> records() const;
    std::vector<std::string> ids() const; // sorted, unique

    static ScoreCache load_csv(const std::filesystem::path& file);
    /// Rewrites the whole cache (header + one row per pair, key-sorted).
    void save_csv(const std::filesystem::path& file) const;
    /// Appends rows for the given keys; creates file + header when missing.
    void append_csv(const std::filesystem::path& file, std::span<const PairKey> keys) const;

    static std::string format_row(const PairScore& score);
    static PairScore parse_row(const std::string& line);

private:
    std::map<PairKey, PairScore> records_;
};

struct PairwiseOutcome {
    ScoreCache cache;
    std::vector<PairKey> skipped; // dimension mismatches
};

/// mIoU for every unordered pair in the corpus, distributed over a worker
/// pool. Pairs whose images disagree on shape are skipped and reported.
PairwiseOutcome pairwise_miou(std::span<const FloorPlan> corpus, const CategoryMap& categories,
                              int workers = 0);

/// Per-identity candidate lists: the n best partners by cached mIoU,
/// descending, ties by candidate id ascending. Lists are shorter than n when
/// the corpus is small; pairs without a cached mIoU are not candidates.
std::map<std::string, std::vector<std::string>> prefilter_topn(const ScoreCache& cache, int n);

struct RankEntry {
    std::string id;
    double miou = 0.0;
    double nged = 0.0;
    double ssig = 0.0;
    bool approx = false;
};

struct RankedList {
    std::string query_id;
    std::vector<RankEntry> entries; // ssig desc, nged asc, id asc

    nlohmann::json to_json() const;
};

struct RankOptions {
    SsigParams ssig;
    int ged_budget = kDefaultGedBudget;
    int beam_width = 64;
    int workers = 0;
};

/// Fills ged/nged/ssig/approx on the cache rows for the given pairs. Exact
/// GED within the budget, beam fallback (flagged approximate) above it.
/// Results are memoized by canonical graph-pair key.
void score_pairs_ssig(ScoreCache& cache, std::span<const FloorPlan> corpus,
                      std::span<const PairKey> pairs, const RankOptions& options, GedMemo& memo);

/// SSIG re-ranking of the prefiltered candidate lists. Scores each surviving
/// pair once (lazily, memoized) and emits one RankedList per identity.
std::vector<RankedList> rank_ssig(const std::map<std::string, std::vector<std::string>>& candidates,
                                  std::span<const FloorPlan> corpus, ScoreCache& cache,
                                  const RankOptions& options, GedMemo* memo = nullptr);

/// Greedy near-duplicate sweep in ascending id order: an id is dropped iff
/// its mIoU with an already retained id is >= tau.
std::vector<std::string> dedup(std::span<const std::string> ids, const ScoreCache& cache, double tau);

/// Ranks one (possibly unseen) plan against the corpus: mIoU to every corpus
/// plan, top-n prefilter, SSIG scoring, then the best top_k entries.
RankedList query_plan(const FloorPlan& query, std::span<const FloorPlan> corpus,
                      const CategoryMap& categories, int n, int top_k, const RankOptions& options,
                      GedMemo* memo = nullptr);

} // namespace fpsim

#endif
