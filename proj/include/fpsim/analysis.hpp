#ifndef FPSIM_ANALYSIS_HPP
#define FPSIM_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fpsim/core.hpp"
#include "fpsim/rank.hpp"

namespace fpsim {

struct Histogram {
    int bins = 0;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> density; // sums to 1

    int bin_of(double value) const;
};

/// Equal-width bins over [lo,hi]; out-of-range values clamp to the end bins.
Histogram histogram(std::span<const double> values, int bins, double lo, double hi);

/// Mean mIoU of one plan against every other plan in the cache. Lower means
/// more original. Throws MissingPairs when the cache does not cover the id
/// against all other ids.
double originality_iou(const std::string& id, const ScoreCache& cache);

struct CensusEntry {
    std::string key;
    int count = 0;
};

struct CensusResult {
    std::vector<CensusEntry> groups; // count desc, key asc
    int excluded = 0;                // graphs over the canonical-key budget
    bool attribute_aware = true;

    /// Occurrence count of the group containing `key` (graph originality:
    /// fewer = more original).
    int occurrences(const std::string& key) const;
};

/// Groups the corpus by graph isomorphism class via canonical keys.
CensusResult base_graph_census(std::span<const FloorPlan> corpus, bool attribute_aware);

/// Pearson correlation between miou and -nged over cache records carrying
/// both fields. Throws DegenerateVariance on constant inputs or fewer than
/// two records.
double correlation_iou_ged(const ScoreCache& cache);

/// Fraction of sampled record pairs where the strict ordering of miou agrees
/// with the strict ordering of nged (higher visual similarity with larger
/// graph distance, or lower with smaller). Ties on either coordinate leave
/// the denominator. Deterministic for a fixed seed.
double opposition_rate(const ScoreCache& cache, std::int64_t sample_count, std::uint64_t seed);

struct DensityMap {
    int bins_x = 0; // miou axis
    int bins_y = 0; // nged axis
    std::vector<double> mass; // row-major [y * bins_x + x], sums to 1

    double at(int x, int y) const { return mass[static_cast<std::size_t>(y) * bins_x + x]; }
};

/// Joint distribution of (miou, nged) over records carrying both fields.
DensityMap density_map_2d(const ScoreCache& cache, int bins_x, int bins_y);

struct SweepEntry {
    int n = 0;
    Histogram miou;
    Histogram nged;
    Histogram ssig;
    double mean_miou = 0.0;
    double mean_nged = 0.0;
    double mean_ssig = 0.0;
};

/// Distributions of miou/nged/ssig among the per-identity top-n survivor
/// entries, for each requested n. Each identity contributes its own top-n
/// list, so a pair surviving for both endpoints counts twice, matching
/// per-identity retrieval statistics.
std::vector<SweepEntry> topn_distribution_sweep(std::span<const FloorPlan> corpus,
                                                const CategoryMap& categories,
                                                std::span<const int> n_values,
                                                const RankOptions& options,
                                                ScoreCache* cache = nullptr, int hist_bins = 100);

} // namespace fpsim

#endif
