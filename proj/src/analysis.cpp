#include "fpsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "fpsim/ged.hpp"
#include "fpsim/util.hpp"

namespace fpsim {

int Histogram::bin_of(double value) const {
    double t = (value - lo) / (hi - lo);
    int bin = static_cast<int>(t * bins);
    return std::clamp(bin, 0, bins - 1);
}

Histogram histogram(std::span<const double> values, int bins, double lo, double hi) {
    if (values.empty()) throw EmptyInput("histogram: no values");
    if (bins < 1) throw Error("histogram: bins must be >= 1");
    if (!(hi > lo)) throw Error("histogram: hi must exceed lo");
    Histogram h;
    h.bins = bins;
    h.lo = lo;
    h.hi = hi;
    h.density.assign(bins, 0.0);
    for (double v : values) h.density[h.bin_of(v)] += 1.0;
    for (double& d : h.density) d /= static_cast<double>(values.size());
    return h;
}

double originality_iou(const std::string& id, const ScoreCache& cache) {
    std::vector<std::string> ids = cache.ids();
    double sum = 0.0;
    int count = 0;
    for (const std::string& other : ids) {
        if (other == id) continue;
        const PairScore* score = cache.find(id, other);
        if (!score || !score->miou) {
            throw MissingPairs("originality_iou: no miou for pair " + id + "," + other);
        }
        sum += *score->miou;
        ++count;
    }
    if (count == 0) throw MissingPairs("originality_iou: no partners for id " + id);
    return sum / count;
}

int CensusResult::occurrences(const std::string& key) const {
    for (const CensusEntry& e : groups) {
        if (e.key == key) return e.count;
    }
    return 0;
}

CensusResult base_graph_census(std::span<const FloorPlan> corpus, bool attribute_aware) {
    CensusResult out;
    out.attribute_aware = attribute_aware;
    std::map<std::string, int> counts;
    for (const FloorPlan& plan : corpus) {
        try {
            ++counts[canonical_key(plan.graph, attribute_aware)];
        } catch (const BudgetExceeded&) {
            ++out.excluded;
        }
    }
    for (const auto& [key, count] : counts) out.groups.push_back({key, count});
    std::sort(out.groups.begin(), out.groups.end(), [](const CensusEntry& l, const CensusEntry& r) {
        if (l.count != r.count) return l.count > r.count;
        return l.key < r.key;
    });
    return out;
}

namespace {

std::vector<std::pair<double, double>> scored_records(const ScoreCache& cache) {
    std::vector<std::pair<double, double>> out;
    for (const PairScore* score : cache.records()) {
        if (score->miou && score->nged) out.emplace_back(*score->miou, *score->nged);
    }
    return out;
}

} // namespace

double correlation_iou_ged(const ScoreCache& cache) {
    std::vector<std::pair<double, double>> records = scored_records(cache);
    if (records.size() < 2) {
        throw DegenerateVariance("correlation_iou_ged: need at least two scored records");
    }
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& [m, n] : records) {
        mean_x += m;
        mean_y += -n;
    }
    mean_x /= records.size();
    mean_y /= records.size();
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (const auto& [m, n] : records) {
        double dx = m - mean_x;
        double dy = -n - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DegenerateVariance("correlation_iou_ged: zero variance in miou or nged");
    }
    return sxy / std::sqrt(sxx * syy);
}

double opposition_rate(const ScoreCache& cache, std::int64_t sample_count, std::uint64_t seed) {
    std::vector<std::pair<double, double>> records = scored_records(cache);
    if (records.size() < 2) {
        throw InsufficientStrictPairs("opposition_rate: need at least two scored records");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, records.size() - 1);
    std::int64_t strict = 0;
    std::int64_t agree = 0;
    for (std::int64_t t = 0; t < sample_count; ++t) {
        const auto& [m1, n1] = records[pick(rng)];
        const auto& [m2, n2] = records[pick(rng)];
        if (m1 == m2 || n1 == n2) continue; // ties leave the denominator
        ++strict;
        bool same_sign = (m1 > m2) == (n1 > n2);
        agree += same_sign ? 1 : 0;
    }
    if (strict == 0) {
        throw InsufficientStrictPairs("opposition_rate: no strictly ordered sample pairs");
    }
    return static_cast<double>(agree) / static_cast<double>(strict);
}

DensityMap density_map_2d(const ScoreCache& cache, int bins_x, int bins_y) {
    std::vector<std::pair<double, double>> records = scored_records(cache);
    if (records.empty()) throw EmptyInput("density_map_2d: no scored records");
    if (bins_x < 1 || bins_y < 1) throw Error("density_map_2d: bins must be >= 1");
    DensityMap map;
    map.bins_x = bins_x;
    map.bins_y = bins_y;
    map.mass.assign(static_cast<std::size_t>(bins_x) * bins_y, 0.0);
    Histogram x_axis{bins_x, 0.0, 1.0, {}};
    Histogram y_axis{bins_y, 0.0, 1.0, {}};
    for (const auto& [m, n] : records) {
        int x = x_axis.bin_of(m);
        int y = y_axis.bin_of(n);
        map.mass[static_cast<std::size_t>(y) * bins_x + x] += 1.0;
    }
    for (double& cell : map.mass) cell /= static_cast<double>(records.size());
    return map;
}

std::vector<SweepEntry> topn_distribution_sweep(std::span<const FloorPlan> corpus,
                                                const CategoryMap& categories,
                                                std::span<const int> n_values,
                                                const RankOptions& options, ScoreCache* cache,
                                                int hist_bins) {
    if (n_values.empty()) throw EmptyInput("topn_distribution_sweep: no n values");
    ScoreCache local;
    if (!cache) {
        local = pairwise_miou(corpus, categories, options.workers).cache;
        cache = &local;
    }

    int max_n = *std::max_element(n_values.begin(), n_values.end());
    auto lists = prefilter_topn(*cache, max_n);

    // Score every pair surviving at the widest n once; narrower n reuse them
    // because smaller lists are prefixes of larger ones.
    std::set<PairKey> unique_pairs;
    for (const auto& [id, candidates] : lists) {
        for (const std::string& candidate : candidates) {
            unique_pairs.insert(make_pair_key(id, candidate));
        }
    }
    std::vector<PairKey> pairs(unique_pairs.begin(), unique_pairs.end());
    GedMemo memo;
    score_pairs_ssig(*cache, corpus, pairs, options, memo);

    std::vector<SweepEntry> out;
    for (int n : n_values) {
        std::vector<double> miou_vals;
        std::vector<double> nged_vals;
        std::vector<double> ssig_vals;
        for (const auto& [id, candidates] : lists) {
            int keep = std::min<int>(n, static_cast<int>(candidates.size()));
            for (int k = 0; k < keep; ++k) {
                const PairScore* score = cache->find(id, candidates[k]);
                miou_vals.push_back(*score->miou);
                nged_vals.push_back(*score->nged);
                ssig_vals.push_back(*score->ssig);
            }
        }
        if (miou_vals.empty()) throw EmptyInput("topn_distribution_sweep: no survivor pairs");
        SweepEntry entry;
        entry.n = n;
        entry.miou = histogram(miou_vals, hist_bins, 0.0, 1.0);
        entry.nged = histogram(nged_vals, hist_bins, 0.0, 1.0);
        entry.ssig = histogram(ssig_vals, hist_bins, 0.0, 1.0);
        auto mean = [](const std::vector<double>& v) {
            double sum = 0.0;
            for (double x : v) sum += x;
            return sum / static_cast<double>(v.size());
        };
        entry.mean_miou = mean(miou_vals);
        entry.mean_nged = mean(nged_vals);
        entry.mean_ssig = mean(ssig_vals);
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace fpsim
