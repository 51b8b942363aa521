#include "fpsim/rank.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

#include "fpsim/iou.hpp"
#include "fpsim/util.hpp"

namespace fpsim {

namespace {

void check_id(const std::string& id) {
    if (id.empty() || id.find_first_of(",\n\r") != std::string::npos) {
        throw Error("invalid plan id for score cache: '" + id + "'");
    }
}

std::unordered_map<std::string, std::size_t> index_by_id(std::span<const FloorPlan> corpus) {
    std::unordered_map<std::string, std::size_t> index;
    index.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (!index.emplace(corpus[i].id, i).second) {
            throw Error("corpus contains duplicate id: " + corpus[i].id);
        }
    }
    return index;
}

} // namespace

void ScoreCache::upsert(const PairScore& score) {
    check_id(score.id_a);
    check_id(score.id_b);
    if (score.id_b < score.id_a) throw Error("ScoreCache: pair not canonically ordered");
    PairKey key{score.id_a, score.id_b};
    auto [it, inserted] = records_.try_emplace(key, score);
    if (inserted) return;
    PairScore& existing = it->second;
    if (score.miou) existing.miou = score.miou;
    if (score.ged) existing.ged = score.ged;
    if (score.nged) existing.nged = score.nged;
    if (score.ssig) existing.ssig = score.ssig;
    if (score.approx) existing.approx = score.approx;
}

const PairScore* ScoreCache::find(std::string_view id1, std::string_view id2) const {
    auto it = records_.find(make_pair_key(id1, id2));
    return it == records_.end() ? nullptr : &it->second;
}

std::vector<const PairScore*> ScoreCache::records() const {
    std::vector<const PairScore*> out;
    out.reserve(records_.size());
    for (const auto& [key, score] : records_) out.push_back(&score);
    return out;
}

std::vector<std::string> ScoreCache::ids() const {
    std::set<std::string> seen;
    for (const auto& [key, score] : records_) {
        seen.insert(key.a);
        seen.insert(key.b);
    }
    return std::vector<std::string>(seen.begin(), seen.end());
}

std::string ScoreCache::format_row(const PairScore& s) {
    std::string row = s.id_a + "," + s.id_b + ",";
    if (s.miou) row += format_double(*s.miou);
    row += ",";
    if (s.ged) row += std::to_string(*s.ged);
    row += ",";
    if (s.nged) row += format_double(*s.nged);
    row += ",";
    if (s.ssig) row += format_double(*s.ssig);
    row += ",";
    if (s.approx) row += *s.approx ? "1" : "0";
    return row;
}

PairScore ScoreCache::parse_row(const std::string& line) {
    std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 7) throw Error("score cache row needs 7 fields: " + line);
    PairScore s;
    s.id_a = fields[0];
    s.id_b = fields[1];
    if (!fields[2].empty()) s.miou = std::stod(fields[2]);
    if (!fields[3].empty()) s.ged = std::stoi(fields[3]);
    if (!fields[4].empty()) s.nged = std::stod(fields[4]);
    if (!fields[5].empty()) s.ssig = std::stod(fields[5]);
    if (!fields[6].empty()) s.approx = fields[6] == "1";
    return s;
}

ScoreCache ScoreCache::load_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open score cache: " + file.string());
    std::string line;
    if (!std::getline(in, line)) throw Error("score cache is empty (missing header)");
    if (line != kScoreCacheHeader) {
        throw Error("unrecognized score cache header: " + line);
    }
    ScoreCache cache;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        cache.upsert(parse_row(line));
    }
    return cache;
}

void ScoreCache::save_csv(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::trunc);
    if (!out) throw Error("cannot write score cache: " + file.string());
    out << kScoreCacheHeader << "\n";
    for (const auto& [key, score] : records_) out << format_row(score) << "\n";
}

void ScoreCache::append_csv(const std::filesystem::path& file, std::span<const PairKey> keys) const {
    bool fresh = !std::filesystem::exists(file) || std::filesystem::file_size(file) == 0;
    std::ofstream out(file, std::ios::app);
    if (!out) throw Error("cannot append to score cache: " + file.string());
    if (fresh) out << kScoreCacheHeader << "\n";
    for (const PairKey& key : keys) {
        auto it = records_.find(key);
        if (it == records_.end()) throw Error("append_csv: pair not in cache: " + key.a + "," + key.b);
        out << format_row(it->second) << "\n";
    }
}

PairwiseOutcome pairwise_miou(std::span<const FloorPlan> corpus, const CategoryMap& categories,
                              int workers) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(corpus.size() * (corpus.size() - 1) / 2);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (std::size_t j = i + 1; j < corpus.size(); ++j) {
            pairs.emplace_back(i, j);
        }
    }

    // -1 marks a skipped (shape-mismatched) pair.
    std::vector<double> values(pairs.size(), -1.0);
    parallel_for(pairs.size(), workers, [&](std::size_t k) {
        const auto& [i, j] = pairs[k];
        try {
            values[k] = miou(corpus[i].image, corpus[j].image, categories);
        } catch (const DimensionMismatch&) {
            values[k] = -1.0;
        }
    });

    PairwiseOutcome out;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& [i, j] = pairs[k];
        PairKey key = make_pair_key(corpus[i].id, corpus[j].id);
        if (values[k] < 0.0) {
            out.skipped.push_back(key);
            continue;
        }
        PairScore score;
        score.id_a = key.a;
        score.id_b = key.b;
        score.miou = values[k];
        out.cache.upsert(score);
    }
    return out;
}

std::map<std::string, std::vector<std::string>> prefilter_topn(const ScoreCache& cache, int n) {
    if (n < 1) throw Error("prefilter_topn: n must be >= 1");
    struct Candidate {
        double miou;
        const std::string* id;
    };
    std::map<std::string, std::vector<Candidate>> per_id;
    for (const PairScore* score : cache.records()) {
        if (!score->miou) continue;
        per_id[score->id_a].push_back({*score->miou, &score->id_b});
        per_id[score->id_b].push_back({*score->miou, &score->id_a});
    }
    std::map<std::string, std::vector<std::string>> out;
    for (auto& [id, candidates] : per_id) {
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
            if (l.miou != r.miou) return l.miou > r.miou;
            return *l.id < *r.id;
        });
        if (static_cast<int>(candidates.size()) > n) candidates.resize(n);
        std::vector<std::string> ids;
        ids.reserve(candidates.size());
        for (const Candidate& c : candidates) ids.push_back(*c.id);
        out.emplace(id, std::move(ids));
    }
    return out;
}

nlohmann::json RankedList::to_json() const {
    nlohmann::json results = nlohmann::json::array();
    for (const RankEntry& e : entries) {
        results.push_back({{"id", e.id},
                           {"miou", e.miou},
                           {"nged", e.nged},
                           {"ssig", e.ssig},
                           {"approx", e.approx}});
    }
    return nlohmann::json{{"query", query_id}, {"results", results}};
}

void score_pairs_ssig(ScoreCache& cache, std::span<const FloorPlan> corpus,
                      std::span<const PairKey> pairs, const RankOptions& options, GedMemo& memo) {
    auto index = index_by_id(corpus);

    // Canonical keys once per distinct graph.
    std::vector<std::string> graph_keys(corpus.size());
    parallel_for(corpus.size(), options.workers, [&](std::size_t i) {
        graph_keys[i] = canonical_key(corpus[i].graph, true);
    });

    struct PairResult {
        int ged = 0;
        bool approx = false;
    };
    std::vector<PairResult> results(pairs.size());
    parallel_for(pairs.size(), options.workers, [&](std::size_t k) {
        const FloorPlan& pa = corpus[index.at(pairs[k].a)];
        const FloorPlan& pb = corpus[index.at(pairs[k].b)];
        std::string key = GedMemo::pair_key(graph_keys[index.at(pairs[k].a)],
                                            graph_keys[index.at(pairs[k].b)]);
        if (auto hit = memo.find(key)) {
            results[k] = {hit->ged, hit->approx};
            return;
        }
        PairResult r;
        if (std::max(pa.graph.order(), pb.graph.order()) <= options.ged_budget) {
            try {
                r.ged = ged_exact(pa.graph, pb.graph, options.ged_budget).cost;
                r.approx = false;
            } catch (const Error&) {
                r.ged = ged_beam(pa.graph, pb.graph, options.beam_width).cost;
                r.approx = true;
            }
        } else {
            r.ged = ged_beam(pa.graph, pb.graph, options.beam_width).cost;
            r.approx = true;
        }
        memo.insert(key, {r.ged, r.approx});
        results[k] = r;
    });

    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const FloorPlan& pa = corpus[index.at(pairs[k].a)];
        const FloorPlan& pb = corpus[index.at(pairs[k].b)];
        const PairScore* existing = cache.find(pairs[k].a, pairs[k].b);
        if (!existing || !existing->miou) {
            throw MissingPairs("score_pairs_ssig: pair lacks cached miou: " + pairs[k].a + "," +
                               pairs[k].b);
        }
        PairScore update;
        update.id_a = pairs[k].a;
        update.id_b = pairs[k].b;
        update.ged = results[k].ged;
        update.nged = nged(results[k].ged, pa.graph.order(), pb.graph.order());
        update.ssig = ssig(*existing->miou, *update.nged, options.ssig);
        update.approx = results[k].approx;
        cache.upsert(update);
    }
}

std::vector<RankedList> rank_ssig(const std::map<std::string, std::vector<std::string>>& candidates,
                                  std::span<const FloorPlan> corpus, ScoreCache& cache,
                                  const RankOptions& options, GedMemo* memo) {
    auto index = index_by_id(corpus);
    for (const auto& [query, list] : candidates) {
        if (!index.count(query)) throw Error("rank_ssig: unknown query id " + query);
        for (const std::string& candidate : list) {
            if (!index.count(candidate)) throw Error("rank_ssig: unknown candidate id " + candidate);
        }
    }

    std::set<PairKey> unique_pairs;
    for (const auto& [query, list] : candidates) {
        for (const std::string& candidate : list) {
            unique_pairs.insert(make_pair_key(query, candidate));
        }
    }
    std::vector<PairKey> pairs(unique_pairs.begin(), unique_pairs.end());

    GedMemo local_memo;
    score_pairs_ssig(cache, corpus, pairs, options, memo ? *memo : local_memo);

    std::vector<RankedList> out;
    for (const auto& [query, list] : candidates) {
        RankedList ranked;
        ranked.query_id = query;
        for (const std::string& candidate : list) {
            if (candidate == query) continue;
            const PairScore* score = cache.find(query, candidate);
            RankEntry entry;
            entry.id = candidate;
            entry.miou = *score->miou;
            entry.nged = *score->nged;
            entry.ssig = *score->ssig;
            entry.approx = score->approx.value_or(false);
            ranked.entries.push_back(std::move(entry));
        }
        std::sort(ranked.entries.begin(), ranked.entries.end(),
                  [](const RankEntry& l, const RankEntry& r) {
                      if (l.ssig != r.ssig) return l.ssig > r.ssig;
                      if (l.nged != r.nged) return l.nged < r.nged;
                      return l.id < r.id;
                  });
        out.push_back(std::move(ranked));
    }
    return out;
}

std::vector<std::string> dedup(std::span<const std::string> ids, const ScoreCache& cache, double tau) {
    if (!(tau > 0.0 && tau <= 1.0)) throw OutOfRange("dedup: tau must be in (0,1]");
    std::vector<std::string> sorted(ids.begin(), ids.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::string> retained;
    for (const std::string& id : sorted) {
        bool duplicate = false;
        for (const std::string& kept : retained) {
            const PairScore* score = cache.find(kept, id);
            if (score && score->miou && *score->miou >= tau) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) retained.push_back(id);
    }
    return retained;
}

RankedList query_plan(const FloorPlan& query, std::span<const FloorPlan> corpus,
                      const CategoryMap& categories, int n, int top_k, const RankOptions& options,
                      GedMemo* memo) {
    if (n < 1 || top_k < 1) throw Error("query_plan: n and top_k must be >= 1");

    struct Scored {
        double miou;
        std::size_t index;
    };
    std::vector<std::optional<Scored>> scored(corpus.size());
    parallel_for(corpus.size(), options.workers, [&](std::size_t i) {
        if (corpus[i].id == query.id) return;
        try {
            scored[i] = Scored{miou(query.image, corpus[i].image, categories), i};
        } catch (const DimensionMismatch&) {
        }
    });
    std::vector<Scored> candidates;
    for (const auto& s : scored) {
        if (s) candidates.push_back(*s);
    }
    std::sort(candidates.begin(), candidates.end(), [&](const Scored& l, const Scored& r) {
        if (l.miou != r.miou) return l.miou > r.miou;
        return corpus[l.index].id < corpus[r.index].id;
    });
    if (static_cast<int>(candidates.size()) > n) candidates.resize(n);

    GedMemo local_memo;
    GedMemo& use_memo = memo ? *memo : local_memo;
    std::string query_key = canonical_key(query.graph, true);

    RankedList ranked;
    ranked.query_id = query.id;
    std::vector<RankEntry> entries(candidates.size());
    parallel_for(candidates.size(), options.workers, [&](std::size_t k) {
        const FloorPlan& plan = corpus[candidates[k].index];
        std::string key = GedMemo::pair_key(query_key, canonical_key(plan.graph, true));
        int ged_value;
        bool approx;
        if (auto hit = use_memo.find(key)) {
            ged_value = hit->ged;
            approx = hit->approx;
        } else {
            if (std::max(query.graph.order(), plan.graph.order()) <= options.ged_budget) {
                try {
                    ged_value = ged_exact(query.graph, plan.graph, options.ged_budget).cost;
                    approx = false;
                } catch (const Error&) {
                    ged_value = ged_beam(query.graph, plan.graph, options.beam_width).cost;
                    approx = true;
                }
            } else {
                ged_value = ged_beam(query.graph, plan.graph, options.beam_width).cost;
                approx = true;
            }
            use_memo.insert(key, {ged_value, approx});
        }
        double nged_value = nged(ged_value, query.graph.order(), plan.graph.order());
        entries[k] = {plan.id, candidates[k].miou, nged_value,
                      ssig(candidates[k].miou, nged_value, options.ssig), approx};
    });
    ranked.entries = std::move(entries);
    std::sort(ranked.entries.begin(), ranked.entries.end(),
              [](const RankEntry& l, const RankEntry& r) {
                  if (l.ssig != r.ssig) return l.ssig > r.ssig;
                  if (l.nged != r.nged) return l.nged < r.nged;
                  return l.id < r.id;
              });
    if (static_cast<int>(ranked.entries.size()) > top_k) ranked.entries.resize(top_k);
    return ranked;
}

} // namespace fpsim
