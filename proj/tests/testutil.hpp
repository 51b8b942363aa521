// Shared fixtures and independent oracles for the test suites.
//
// The oracles here are deliberately naive (exhaustive enumeration, direct
// recomputation) and never call into the search code they check.

#ifndef FPSIM_TESTUTIL_HPP
#define FPSIM_TESTUTIL_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fpsim/core.hpp"
#include "fpsim/extract.hpp"

namespace fpsim::testutil {

// ---------------------------------------------------------------------------
// Category map for synthetic fixtures: 0 background, 1 wall, 2 door,
// 3..8 room types.
inline CategoryMap fixture_categories() {
    std::vector<CategoryEntry> entries = {
        {0, "outside", Role::Background}, {1, "wall", Role::Separator},
        {2, "door", Role::Opening},       {3, "living", Role::Area},
        {4, "kitchen", Role::Area},       {5, "bath", Role::Area},
        {6, "bedroom", Role::Area},       {7, "study", Role::Area},
        {8, "balcony", Role::Area},
    };
    return CategoryMap(std::move(entries));
}

inline constexpr CategoryCode kBackground = 0;
inline constexpr CategoryCode kWall = 1;
inline constexpr CategoryCode kDoor = 2;
inline constexpr CategoryCode kFirstRoom = 3;

// ---------------------------------------------------------------------------
// Worked 3-node example: a star (living-kitchen, living-bath doors) against
// a path (living-kitchen, kitchen-bath doors). Exact edit distance 2 with
// equal label multisets, orders 3 and 3.
inline std::pair<AccessGraph, AccessGraph> worked_example_pair() {
    AccessGraph star;
    star.add_node(3); // living
    star.add_node(4); // kitchen
    star.add_node(5); // bath
    star.add_edge(0, 1, Connectivity::Door);
    star.add_edge(0, 2, Connectivity::Door);

    AccessGraph path;
    path.add_node(3);
    path.add_node(4);
    path.add_node(5);
    path.add_edge(0, 1, Connectivity::Door);
    path.add_edge(1, 2, Connectivity::Door);
    return {std::move(star), std::move(path)};
}

// ---------------------------------------------------------------------------
// Random attributed graphs (not necessarily valid access graphs: door
// connectivity is a cleaning rule, not a type invariant).
inline AccessGraph random_graph(std::mt19937_64& rng, int max_nodes, int label_count = 4,
                                double edge_prob = 0.45) {
    std::uniform_int_distribution<int> node_count(1, max_nodes);
    std::uniform_int_distribution<int> label(kFirstRoom, kFirstRoom + label_count - 1);
    std::bernoulli_distribution edge(edge_prob);
    std::bernoulli_distribution door(0.6);

    int n = node_count(rng);
    AccessGraph g;
    for (int i = 0; i < n; ++i) g.add_node(static_cast<CategoryCode>(label(rng)));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (edge(rng)) {
                g.add_edge(i, j, door(rng) ? Connectivity::Door : Connectivity::Adjacent);
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Brute-force GED oracle: enumerates every partial injective node mapping
// g1 -> g2 (unmapped g1 nodes deleted, unhit g2 nodes inserted) and scores
// it directly. The minimum over all mappings is the exact edit distance.
namespace detail {

struct OracleView {
    int n;
    std::vector<CategoryCode> label;
    std::vector<std::vector<int>> adj; // 0 none, 1 door, 2 adjacent

    explicit OracleView(const AccessGraph& g) : n(g.order()) {
        label.resize(n);
        adj.assign(n, std::vector<int>(n, 0));
        std::vector<int> ids;
        for (const GraphNode& node : g.nodes()) ids.push_back(node.id);
        for (int i = 0; i < n; ++i) label[i] = g.nodes()[i].room_type;
        for (const GraphEdge& e : g.edges()) {
            int a = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), e.a) - ids.begin());
            int b = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), e.b) - ids.begin());
            int code = e.connectivity == Connectivity::Door ? 1 : 2;
            adj[a][b] = code;
            adj[b][a] = code;
        }
    }
};

inline int mapping_cost(const OracleView& a, const OracleView& b, const std::vector<int>& map) {
    int cost = 0;
    std::vector<bool> hit(b.n, false);
    for (int i = 0; i < a.n; ++i) {
        if (map[i] < 0) {
            cost += 1; // node deletion
        } else {
            hit[map[i]] = true;
            cost += a.label[i] != b.label[map[i]] ? 1 : 0;
        }
    }
    for (int v = 0; v < b.n; ++v) {
        if (!hit[v]) cost += 1; // node insertion
    }
    // g1 edges: delete or substitute
    for (int i = 0; i < a.n; ++i) {
        for (int j = i + 1; j < a.n; ++j) {
            if (a.adj[i][j] == 0) continue;
            if (map[i] >= 0 && map[j] >= 0) {
                int e2 = b.adj[map[i]][map[j]];
                if (e2 == 0) cost += 1;
                else if (e2 != a.adj[i][j]) cost += 1;
            } else {
                cost += 1;
            }
        }
    }
    // g2 edges with no mapped counterpart: insert
    std::vector<int> inverse(b.n, -1);
    for (int i = 0; i < a.n; ++i) {
        if (map[i] >= 0) inverse[map[i]] = i;
    }
    for (int p = 0; p < b.n; ++p) {
        for (int q = p + 1; q < b.n; ++q) {
            if (b.adj[p][q] == 0) continue;
            bool covered = inverse[p] >= 0 && inverse[q] >= 0 && a.adj[inverse[p]][inverse[q]] != 0;
            if (!covered) cost += 1;
        }
    }
    return cost;
}

inline void enumerate_mappings(const OracleView& a, const OracleView& b, std::vector<int>& map,
                               std::vector<bool>& used, int depth, int& best) {
    if (depth == a.n) {
        best = std::min(best, mapping_cost(a, b, map));
        return;
    }
    map[depth] = -1; // deletion
    enumerate_mappings(a, b, map, used, depth + 1, best);
    for (int v = 0; v < b.n; ++v) {
        if (used[v]) continue;
        used[v] = true;
        map[depth] = v;
        enumerate_mappings(a, b, map, used, depth + 1, best);
        used[v] = false;
    }
    map[depth] = -1;
}

} // namespace detail

inline int brute_force_ged(const AccessGraph& g1, const AccessGraph& g2) {
    detail::OracleView a(g1);
    detail::OracleView b(g2);
    std::vector<int> map(a.n, -1);
    std::vector<bool> used(b.n, false);
    int best = std::numeric_limits<int>::max();
    detail::enumerate_mappings(a, b, map, used, 0, best);
    return best;
}

// ---------------------------------------------------------------------------
// Synthetic floor plan corpus. Plans are grid apartments on a fixed canvas:
// jittered footprint and interior cuts, 1-px walls on every cut line, rooms
// typed from a small pool, 2-px doors punched along a random spanning tree
// of the cell grid plus random extras. Deterministic in the seed.
struct CorpusOptions {
    int count = 200;
    int canvas = 64;
    std::uint64_t seed = 20240801;
    int duplicates = 0; // exact copies appended at the end
};

inline SemanticImage render_grid_plan(std::mt19937_64& rng, int canvas) {
    std::uniform_int_distribution<int> rows_dist(1, 3);
    std::uniform_int_distribution<int> cols_dist(1, 3);
    int rows = rows_dist(rng);
    int cols = cols_dist(rng);
    while (rows * cols < 2 || rows * cols > 7) {
        rows = rows_dist(rng);
        cols = cols_dist(rng);
    }

    // Cut coordinates carry the 1-px walls; cell (r,c) interior is the open
    // box (xs[c], xs[c+1]) x (ys[r], ys[r+1]). Segments stay >= 9 px so every
    // room is at least 8 px wide and doors keep clear of wall junctions.
    auto cuts = [&](int segments) {
        std::uniform_int_distribution<int> margin_dist(1, 5);
        int lo = margin_dist(rng);
        int hi = canvas - 1 - margin_dist(rng);
        std::vector<int> out{lo};
        std::uniform_int_distribution<int> jitter(-2, 2);
        for (int i = 1; i < segments; ++i) {
            int base = lo + (hi - lo) * i / segments + jitter(rng);
            base = std::clamp(base, out.back() + 9, hi - 9 * (segments - i));
            out.push_back(base);
        }
        out.push_back(hi);
        return out;
    };
    std::vector<int> xs = cuts(cols);
    std::vector<int> ys = cuts(rows);

    SemanticImage image(canvas, canvas, kBackground);

    std::uniform_int_distribution<int> type_dist(kFirstRoom, kFirstRoom + 5);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            CategoryCode type = static_cast<CategoryCode>(type_dist(rng));
            for (int y = ys[r] + 1; y < ys[r + 1]; ++y) {
                for (int x = xs[c] + 1; x < xs[c + 1]; ++x) {
                    image.set(x, y, type);
                }
            }
        }
    }
    for (int x : xs) {
        for (int y = ys.front(); y <= ys.back(); ++y) image.set(x, y, kWall);
    }
    for (int y : ys) {
        for (int x = xs.front(); x <= xs.back(); ++x) image.set(x, y, kWall);
    }

    // Doors: spanning tree of the cell grid always gets one; other cell
    // borders sometimes. Door pixels stay >= 2 px from wall junctions so the
    // dilation of one door cannot leak into a third room.
    struct CellEdge {
        int r1, c1, r2, c2;
    };
    std::vector<CellEdge> grid_edges;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) grid_edges.push_back({r, c, r, c + 1});
            if (r + 1 < rows) grid_edges.push_back({r, c, r + 1, c});
        }
    }
    std::shuffle(grid_edges.begin(), grid_edges.end(), rng);

    std::vector<int> parent(static_cast<std::size_t>(rows) * cols);
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };

    auto punch_door = [&](const CellEdge& e) {
        if (e.r1 == e.r2) { // shared vertical wall
            int wall_x = xs[std::max(e.c1, e.c2)];
            std::uniform_int_distribution<int> pos(ys[e.r1] + 2, ys[e.r1 + 1] - 3);
            int y = pos(rng);
            image.set(wall_x, y, kDoor);
            image.set(wall_x, y + 1, kDoor);
        } else { // shared horizontal wall
            int wall_y = ys[std::max(e.r1, e.r2)];
            std::uniform_int_distribution<int> pos(xs[e.c1] + 2, xs[e.c1 + 1] - 3);
            int x = pos(rng);
            image.set(x, wall_y, kDoor);
            image.set(x + 1, wall_y, kDoor);
        }
    };

    std::bernoulli_distribution extra_door(0.25);
    for (const CellEdge& e : grid_edges) {
        int cell1 = e.r1 * cols + e.c1;
        int cell2 = e.r2 * cols + e.c2;
        if (find(cell1) != find(cell2)) {
            parent[find(cell1)] = find(cell2);
            punch_door(e);
        } else if (extra_door(rng)) {
            punch_door(e);
        }
    }

    return image;
}

inline std::vector<FloorPlan> make_corpus(const CorpusOptions& options = {}) {
    CategoryMap categories = fixture_categories();
    ExtractionParams params;
    std::mt19937_64 rng(options.seed);

    std::vector<FloorPlan> corpus;
    int serial = 0;
    while (static_cast<int>(corpus.size()) < options.count) {
        SemanticImage image = render_grid_plan(rng, options.canvas);
        FloorPlan plan;
        std::string num = std::to_string(serial);
        plan.id = "plan" + std::string(4 - std::min<std::size_t>(4, num.size()), '0') + num;
        ++serial;
        plan.image = std::move(image);
        try {
            plan.graph = extract_access_graph(plan.image, categories, params);
        } catch (const NoRooms&) {
            continue;
        }
        if (!validate_floor_plan(plan, categories).empty()) continue;
        corpus.push_back(std::move(plan));
    }
    for (int d = 0; d < options.duplicates; ++d) {
        FloorPlan copy = corpus[static_cast<std::size_t>(d) % corpus.size()];
        copy.id = "plandup" + std::to_string(d);
        corpus.push_back(std::move(copy));
    }
    return corpus;
}

} // namespace fpsim::testutil

#endif
