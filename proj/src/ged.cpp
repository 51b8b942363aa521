#include "fpsim/ged.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <set>
#include <sstream>

#include "fpsim/errors.hpp"

namespace fpsim {

namespace {

// Index-based view of an AccessGraph: positions 0..n-1 in ascending node-id
// order, dense adjacency codes (0 none, 1 door, 2 adjacent).
struct GraphView {
    int n = 0;
    std::vector<CategoryCode> label;
    std::vector<int> node_id;
    std::vector<std::vector<std::uint8_t>> adj;
    int edge_total = 0;
    // edges_below[k] = number of edges with both endpoints at positions < k
    std::vector<int> edges_below;

    explicit GraphView(const AccessGraph& g) {
        n = g.order();
        label.resize(n);
        node_id.resize(n);
        adj.assign(n, std::vector<std::uint8_t>(n, 0));
        std::unordered_map<int, int> pos_of;
        for (int i = 0; i < n; ++i) {
            label[i] = g.nodes()[i].room_type;
            node_id[i] = g.nodes()[i].id;
            pos_of[node_id[i]] = i;
        }
        for (const GraphEdge& e : g.edges()) {
            int a = pos_of.at(e.a);
            int b = pos_of.at(e.b);
            std::uint8_t code = e.connectivity == Connectivity::Door ? 1 : 2;
            adj[a][b] = code;
            adj[b][a] = code;
            ++edge_total;
        }
        edges_below.assign(n + 1, 0);
        for (int k = 1; k <= n; ++k) {
            int count = 0;
            for (int i = 0; i < k; ++i) {
                for (int j = i + 1; j < k; ++j) {
                    if (adj[i][j] != 0) ++count;
                }
            }
            edges_below[k] = count;
        }
    }
};

struct SearchState {
    int parent = -1;
    std::int16_t v = -2; // g2 position matched at (depth-1); -1 = deletion
    std::int16_t depth = 0;
    std::uint16_t used = 0; // bitmask of used g2 positions
    std::int32_t g = 0;
    std::int32_t f = 0;
    std::int32_t matched_e2 = 0; // g2 edges with both endpoints used
};

struct QueueItem {
    std::int32_t f;
    std::int16_t depth;
    std::int64_t seq;
    int index;
};

struct QueueOrder {
    bool operator()(const QueueItem& l, const QueueItem& r) const {
        if (l.f != r.f) return l.f > r.f; // min-heap on f
        if (l.depth != r.depth) return l.depth < r.depth; // prefer deeper
        return l.seq > r.seq; // FIFO among equals
    }
};

// Dense relabeling of room types across both graphs, for the label-multiset
// part of the heuristic.
struct LabelSpace {
    std::vector<int> dense1; // per g1 position
    std::vector<int> dense2; // per g2 position
    int count = 0;

    LabelSpace(const GraphView& a, const GraphView& b) {
        std::map<CategoryCode, int> ids;
        for (CategoryCode c : a.label) ids.emplace(c, 0);
        for (CategoryCode c : b.label) ids.emplace(c, 0);
        for (auto& [code, id] : ids) id = count++;
        dense1.reserve(a.label.size());
        for (CategoryCode c : a.label) dense1.push_back(ids[c]);
        dense2.reserve(b.label.size());
        for (CategoryCode c : b.label) dense2.push_back(ids[c]);
    }
};

class GedSearch {
public:
    GedSearch(const AccessGraph& g1, const AccessGraph& g2)
        : view1_(g1), view2_(g2), labels_(view1_, view2_) {
        // suffix label counts of g1: counts over positions >= k
        suffix1_.assign(view1_.n + 1, std::vector<int>(labels_.count, 0));
        for (int k = view1_.n - 1; k >= 0; --k) {
            suffix1_[k] = suffix1_[k + 1];
            ++suffix1_[k][labels_.dense1[k]];
        }
        total2_.assign(labels_.count, 0);
        for (int v = 0; v < view2_.n; ++v) ++total2_[labels_.dense2[v]];
    }

    GedResult exact();
    GedResult beam(int width);
    int root_bound() const { return heuristic(0, 0, 0); }

private:
    int heuristic(int depth, std::uint16_t used, int matched_e2) const;
    void materialize_assignment(int state_index, std::vector<int>& assign) const;
    // Appends all children of `parent_index` to the arena and returns their indices.
    void expand(int parent_index, const std::vector<int>& assign, std::vector<int>& children);
    GedResult finish(int state_index) const;

    GraphView view1_;
    GraphView view2_;
    LabelSpace labels_;
    std::vector<std::vector<int>> suffix1_;
    std::vector<int> total2_;
    std::vector<SearchState> arena_;

    static constexpr std::size_t kStateCap = 20'000'000;
};

int GedSearch::heuristic(int depth, std::uint16_t used, int matched_e2) const {
    int r1 = view1_.n - depth;
    int r2 = view2_.n;
    std::vector<int> remaining2 = total2_;
    for (int v = 0; v < view2_.n; ++v) {
        if (used & (1u << v)) {
            --remaining2[labels_.dense2[v]];
            --r2;
        }
    }
    int common = 0;
    for (int l = 0; l < labels_.count; ++l) {
        common += std::min(suffix1_[depth][l], remaining2[l]);
    }
    int node_part = std::max(r1, r2) - common;
    int pending1 = view1_.edge_total - view1_.edges_below[depth];
    int pending2 = view2_.edge_total - matched_e2;
    int edge_part = std::abs(pending1 - pending2);
    return node_part + edge_part;
}

void GedSearch::materialize_assignment(int state_index, std::vector<int>& assign) const {
    const SearchState& s = arena_[state_index];
    assign.assign(s.depth, -1);
    int cur = state_index;
    while (cur >= 0 && arena_[cur].depth > 0) {
        assign[arena_[cur].depth - 1] = arena_[cur].v;
        cur = arena_[cur].parent;
    }
}

void GedSearch::expand(int parent_index, const std::vector<int>& assign, std::vector<int>& children) {
    children.clear();
    const int k = arena_[parent_index].depth; // g1 position being assigned
    const SearchState parent = arena_[parent_index];

    // substitution children, g2 positions ascending
    for (int v = 0; v < view2_.n; ++v) {
        if (parent.used & (1u << v)) continue;
        int cost = view1_.label[k] != view2_.label[v] ? 1 : 0;
        int matched_e2 = parent.matched_e2;
        for (int j = 0; j < k; ++j) {
            std::uint8_t e1 = view1_.adj[k][j];
            int w = assign[j];
            std::uint8_t e2 = w >= 0 ? view2_.adj[v][w] : 0;
            if (e2 != 0) ++matched_e2;
            if (e1 != 0 && e2 != 0) {
                cost += e1 != e2 ? 1 : 0;
            } else if (e1 != e2) {
                cost += 1; // one side only: delete or insert
            }
        }
        SearchState child;
        child.parent = parent_index;
        child.v = static_cast<std::int16_t>(v);
        child.depth = static_cast<std::int16_t>(k + 1);
        child.used = static_cast<std::uint16_t>(parent.used | (1u << v));
        child.g = parent.g + cost;
        child.matched_e2 = matched_e2;
        child.f = child.g + heuristic(child.depth, child.used, child.matched_e2);
        if (arena_.size() >= kStateCap) throw Error("ged search exceeded state cap");
        arena_.push_back(child);
        children.push_back(static_cast<int>(arena_.size()) - 1);
    }

    // deletion child
    {
        int cost = 1;
        for (int j = 0; j < k; ++j) {
            if (view1_.adj[k][j] != 0) cost += 1;
        }
        SearchState child;
        child.parent = parent_index;
        child.v = -1;
        child.depth = static_cast<std::int16_t>(k + 1);
        child.used = parent.used;
        child.g = parent.g + cost;
        child.matched_e2 = parent.matched_e2;
        child.f = child.g + heuristic(child.depth, child.used, child.matched_e2);
        if (arena_.size() >= kStateCap) throw Error("ged search exceeded state cap");
        arena_.push_back(child);
        children.push_back(static_cast<int>(arena_.size()) - 1);
    }
}

GedResult GedSearch::finish(int state_index) const {
    const SearchState& s = arena_[state_index];
    // At full depth the heuristic equals the completion cost exactly.
    int total = s.g + heuristic(s.depth, s.used, s.matched_e2);

    std::vector<int> assign;
    materialize_assignment(state_index, assign);
    std::vector<int> inverse(view2_.n, -1);
    for (int i = 0; i < view1_.n; ++i) {
        if (assign[i] >= 0) inverse[assign[i]] = i;
    }

    int base_id = 0;
    for (int id : view1_.node_id) base_id = std::max(base_id, id + 1);
    auto working_id = [&](int v) {
        return inverse[v] >= 0 ? view1_.node_id[inverse[v]] : base_id + view2_.node_id[v];
    };
    auto conn_of = [](std::uint8_t code) {
        return code == 1 ? Connectivity::Door : Connectivity::Adjacent;
    };

    EditPath path;
    std::vector<EditOp> edge_subs;

    for (int i = 0; i < view1_.n; ++i) {
        if (assign[i] < 0) continue;
        EditOp op;
        op.kind = EditOpKind::NodeSubstitute;
        op.a = view1_.node_id[i];
        op.b = view2_.node_id[assign[i]];
        op.label = view2_.label[assign[i]];
        op.cost = view1_.label[i] != view2_.label[assign[i]] ? 1 : 0;
        path.ops.push_back(op);
    }
    for (int i = 0; i < view1_.n; ++i) {
        for (int j = i + 1; j < view1_.n; ++j) {
            std::uint8_t e1 = view1_.adj[i][j];
            if (e1 == 0) continue;
            if (assign[i] >= 0 && assign[j] >= 0) {
                std::uint8_t e2 = view2_.adj[assign[i]][assign[j]];
                if (e2 == e1) continue;
                EditOp op;
                op.a = view1_.node_id[i];
                op.b = view1_.node_id[j];
                op.cost = 1;
                if (e2 == 0) {
                    op.kind = EditOpKind::EdgeDelete;
                    path.ops.push_back(op);
                } else {
                    op.kind = EditOpKind::EdgeSubstitute;
                    op.connectivity = conn_of(e2);
                    edge_subs.push_back(op);
                }
            } else {
                EditOp op;
                op.kind = EditOpKind::EdgeDelete;
                op.a = view1_.node_id[i];
                op.b = view1_.node_id[j];
                op.cost = 1;
                path.ops.push_back(op);
            }
        }
    }
    for (int i = 0; i < view1_.n; ++i) {
        if (assign[i] >= 0) continue;
        EditOp op;
        op.kind = EditOpKind::NodeDelete;
        op.a = view1_.node_id[i];
        op.cost = 1;
        path.ops.push_back(op);
    }
    for (int v = 0; v < view2_.n; ++v) {
        if (inverse[v] >= 0) continue;
        EditOp op;
        op.kind = EditOpKind::NodeInsert;
        op.a = working_id(v);
        op.b = view2_.node_id[v];
        op.label = view2_.label[v];
        op.cost = 1;
        path.ops.push_back(op);
    }
    for (int p = 0; p < view2_.n; ++p) {
        for (int q = p + 1; q < view2_.n; ++q) {
            std::uint8_t e2 = view2_.adj[p][q];
            if (e2 == 0) continue;
            if (inverse[p] >= 0 && inverse[q] >= 0 && view1_.adj[inverse[p]][inverse[q]] != 0) {
                continue; // covered by substitution or identity
            }
            EditOp op;
            op.kind = EditOpKind::EdgeInsert;
            op.a = std::min(working_id(p), working_id(q));
            op.b = std::max(working_id(p), working_id(q));
            op.connectivity = conn_of(e2);
            op.cost = 1;
            path.ops.push_back(op);
        }
    }
    path.ops.insert(path.ops.end(), edge_subs.begin(), edge_subs.end());

    path.total_cost = 0;
    for (const EditOp& op : path.ops) path.total_cost += op.cost;
    assert(path.total_cost == total);

    return GedResult{total, std::move(path)};
}

GedResult GedSearch::exact() {
    arena_.clear();
    SearchState root;
    root.depth = 0;
    root.f = heuristic(0, 0, 0);
    arena_.push_back(root);

    std::priority_queue<QueueItem, std::vector<QueueItem>, QueueOrder> open;
    std::int64_t seq = 0;
    open.push({root.f, 0, seq++, 0});

    std::vector<int> assign;
    std::vector<int> children;
    while (!open.empty()) {
        QueueItem item = open.top();
        open.pop();
        const SearchState& s = arena_[item.index];
        if (s.depth == view1_.n) {
            return finish(item.index);
        }
        materialize_assignment(item.index, assign);
        expand(item.index, assign, children);
        for (int child : children) {
            open.push({arena_[child].f, arena_[child].depth, seq++, child});
        }
    }
    throw Error("ged_exact: search exhausted without a goal"); // unreachable
}

GedResult GedSearch::beam(int width) {
    if (width < 1) throw Error("ged_beam: beam width must be >= 1");
    arena_.clear();
    SearchState root;
    root.depth = 0;
    root.f = heuristic(0, 0, 0);
    arena_.push_back(root);

    std::vector<int> level{0};
    std::vector<int> assign;
    std::vector<int> children;
    for (int depth = 0; depth < view1_.n; ++depth) {
        std::vector<int> next;
        for (int state : level) {
            materialize_assignment(state, assign);
            expand(state, assign, children);
            next.insert(next.end(), children.begin(), children.end());
        }
        // arena order doubles as the deterministic tie-break
        std::stable_sort(next.begin(), next.end(),
                         [&](int l, int r) { return arena_[l].f < arena_[r].f; });
        if (static_cast<int>(next.size()) > width) next.resize(width);
        level = std::move(next);
    }
    int best = level.front();
    for (int state : level) {
        if (arena_[state].f < arena_[best].f) best = state;
    }
    return finish(best);
}

std::atomic<std::uint64_t> g_nged_clamps{0};

} // namespace

std::string EditOp::describe() const {
    std::ostringstream out;
    switch (kind) {
    case EditOpKind::NodeSubstitute:
        out << "node-substitute " << a << " -> " << b << " label=" << int(label);
        break;
    case EditOpKind::NodeDelete:
        out << "node-delete " << a;
        break;
    case EditOpKind::NodeInsert:
        out << "node-insert " << a << " from " << b << " label=" << int(label);
        break;
    case EditOpKind::EdgeDelete:
        out << "edge-delete (" << a << "," << b << ")";
        break;
    case EditOpKind::EdgeInsert:
        out << "edge-insert (" << a << "," << b << ") " << connectivity_name(connectivity);
        break;
    case EditOpKind::EdgeSubstitute:
        out << "edge-substitute (" << a << "," << b << ") -> " << connectivity_name(connectivity);
        break;
    }
    out << " cost=" << cost;
    return out.str();
}

GedResult ged_exact(const AccessGraph& g1, const AccessGraph& g2, int budget) {
    if (std::max(g1.order(), g2.order()) > budget) {
        throw BudgetExceeded("ged_exact: graph order " +
                             std::to_string(std::max(g1.order(), g2.order())) +
                             " exceeds budget " + std::to_string(budget));
    }
    GedSearch search(g1, g2);
    return search.exact();
}

GedResult ged_beam(const AccessGraph& g1, const AccessGraph& g2, int beam_width) {
    GedSearch search(g1, g2);
    return search.beam(beam_width);
}

int ged_lower_bound(const AccessGraph& g1, const AccessGraph& g2) {
    GedSearch search(g1, g2);
    return search.root_bound();
}

double nged(int ged_value, int order1, int order2) {
    if (order1 < 1 || order2 < 1) throw EmptyGraph("nged: graph order must be >= 1");
    double value = static_cast<double>(ged_value) / (static_cast<double>(order1) * order2);
    if (value > 1.0) {
        g_nged_clamps.fetch_add(1, std::memory_order_relaxed);
        return 1.0;
    }
    return value;
}

double nged(const AccessGraph& g1, const AccessGraph& g2, int budget, int beam_width, bool* approx_out) {
    bool approx = std::max(g1.order(), g2.order()) > budget;
    GedResult result = approx ? ged_beam(g1, g2, beam_width) : ged_exact(g1, g2, budget);
    if (approx_out) *approx_out = approx;
    return nged(result.cost, g1.order(), g2.order());
}

std::uint64_t nged_clamp_count() { return g_nged_clamps.load(std::memory_order_relaxed); }
void reset_nged_clamp_count() { g_nged_clamps.store(0, std::memory_order_relaxed); }

namespace {

// Invariant signature used to prune isomorphism candidates.
struct NodeSignature {
    int label; // -1 when attributes are ignored
    int door_degree;
    int adjacent_degree;

    auto operator<=>(const NodeSignature&) const = default;
};

std::vector<NodeSignature> node_signatures(const GraphView& view, bool attribute_aware) {
    std::vector<NodeSignature> sigs(view.n);
    for (int i = 0; i < view.n; ++i) {
        int door = 0;
        int adjacent = 0;
        for (int j = 0; j < view.n; ++j) {
            if (view.adj[i][j] == 1) ++door;
            else if (view.adj[i][j] == 2) ++adjacent;
        }
        if (attribute_aware) {
            sigs[i] = {int(view.label[i]), door, adjacent};
        } else {
            sigs[i] = {-1, door + adjacent, 0};
        }
    }
    return sigs;
}

bool extend_isomorphism(const GraphView& a, const GraphView& b, bool aware,
                        const std::vector<NodeSignature>& sig_a,
                        const std::vector<NodeSignature>& sig_b, std::vector<int>& map,
                        std::vector<bool>& used, int depth) {
    if (depth == a.n) return true;
    for (int v = 0; v < b.n; ++v) {
        if (used[v] || sig_a[depth] != sig_b[v]) continue;
        bool ok = true;
        for (int j = 0; j < depth && ok; ++j) {
            std::uint8_t e1 = a.adj[depth][j];
            std::uint8_t e2 = b.adj[v][map[j]];
            ok = aware ? (e1 == e2) : ((e1 != 0) == (e2 != 0));
        }
        if (!ok) continue;
        map[depth] = v;
        used[v] = true;
        if (extend_isomorphism(a, b, aware, sig_a, sig_b, map, used, depth + 1)) return true;
        used[v] = false;
    }
    return false;
}

} // namespace

bool is_isomorphic(const AccessGraph& g1, const AccessGraph& g2, bool attribute_aware) {
    if (g1.order() != g2.order()) return false;
    if (g1.edges().size() != g2.edges().size()) return false;
    if (g1.order() == 0) return true;

    GraphView a(g1);
    GraphView b(g2);
    std::vector<NodeSignature> sig_a = node_signatures(a, attribute_aware);
    std::vector<NodeSignature> sig_b = node_signatures(b, attribute_aware);
    std::vector<NodeSignature> sorted_a = sig_a;
    std::vector<NodeSignature> sorted_b = sig_b;
    std::sort(sorted_a.begin(), sorted_a.end());
    std::sort(sorted_b.begin(), sorted_b.end());
    if (sorted_a != sorted_b) return false;

    std::vector<int> map(a.n, -1);
    std::vector<bool> used(b.n, false);
    return extend_isomorphism(a, b, attribute_aware, sig_a, sig_b, map, used, 0);
}

namespace {

// Iterated neighborhood refinement; the resulting colors only steer the
// search order, correctness comes from exhausting all tied candidates.
std::vector<int> refine_colors(const GraphView& view, bool aware) {
    std::vector<NodeSignature> sigs = node_signatures(view, aware);
    std::vector<NodeSignature> sorted = sigs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> color(view.n);
    for (int i = 0; i < view.n; ++i) {
        color[i] = static_cast<int>(
            std::lower_bound(sorted.begin(), sorted.end(), sigs[i]) - sorted.begin());
    }
    for (int round = 0; round < view.n; ++round) {
        std::vector<std::pair<int, std::vector<int>>> keys(view.n);
        for (int i = 0; i < view.n; ++i) {
            std::vector<int> neigh;
            for (int j = 0; j < view.n; ++j) {
                if (view.adj[i][j] == 0) continue;
                int code = aware ? view.adj[i][j] : 1;
                neigh.push_back(code * 1000 + color[j]);
            }
            std::sort(neigh.begin(), neigh.end());
            keys[i] = {color[i], std::move(neigh)};
        }
        std::vector<std::pair<int, std::vector<int>>> uniq = keys;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::vector<int> next(view.n);
        for (int i = 0; i < view.n; ++i) {
            next[i] = static_cast<int>(
                std::lower_bound(uniq.begin(), uniq.end(), keys[i]) - uniq.begin());
        }
        if (next == color) break;
        color = std::move(next);
    }
    return color;
}

struct CanonicalSearch {
    const GraphView& view;
    bool aware;
    std::vector<int> order_hint; // candidate visit order
    std::vector<int> placed;     // positions of placed nodes (original index)
    std::vector<bool> used;
    std::vector<int> cur;
    std::vector<int> best;
    bool have_best = false;

    CanonicalSearch(const GraphView& v, bool a) : view(v), aware(a), used(v.n, false) {
        std::vector<int> color = refine_colors(view, aware);
        order_hint.resize(view.n);
        for (int i = 0; i < view.n; ++i) order_hint[i] = i;
        std::sort(order_hint.begin(), order_hint.end(), [&](int l, int r) {
            if (color[l] != color[r]) return color[l] < color[r];
            return l < r;
        });
    }

    void run() { descend(false); }

    void descend(bool already_smaller) {
        int depth = static_cast<int>(placed.size());
        if (depth == view.n) {
            if (!have_best || already_smaller) {
                best = cur;
                have_best = true;
            }
            return;
        }
        for (int candidate : order_hint) {
            if (used[candidate]) continue;
            std::size_t mark = cur.size();
            bool smaller = already_smaller;
            bool pruned = false;
            auto push_token = [&](int token) {
                if (pruned) return;
                cur.push_back(token);
                if (!smaller && have_best) {
                    int other = best[cur.size() - 1];
                    if (token < other) smaller = true;
                    else if (token > other) pruned = true;
                }
            };
            if (aware) push_token(int(view.label[candidate]));
            for (int j = 0; j < depth && !pruned; ++j) {
                int code = view.adj[candidate][placed[j]];
                push_token(aware ? code : (code != 0 ? 1 : 0));
            }
            if (!pruned) {
                placed.push_back(candidate);
                used[candidate] = true;
                descend(smaller);
                used[candidate] = false;
                placed.pop_back();
            }
            cur.resize(mark);
        }
    }
};

} // namespace

std::string canonical_key(const AccessGraph& g, bool attribute_aware) {
    if (g.order() > kCanonicalKeyMaxNodes) {
        throw BudgetExceeded("canonical_key: graph order " + std::to_string(g.order()) +
                             " exceeds " + std::to_string(kCanonicalKeyMaxNodes));
    }
    GraphView view(g);
    std::ostringstream out;
    out << "n=" << view.n << ";aware=" << (attribute_aware ? 1 : 0) << ";";
    if (view.n > 0) {
        CanonicalSearch search(view, attribute_aware);
        search.run();
        for (std::size_t i = 0; i < search.best.size(); ++i) {
            if (i) out << ",";
            out << search.best[i];
        }
    }
    return out.str();
}

AccessGraph apply_edit_path(const AccessGraph& g1, const EditPath& path) {
    struct WorkNode {
        int id;
        CategoryCode label;
        int pixel_area;
    };
    std::vector<WorkNode> nodes;
    for (const GraphNode& n : g1.nodes()) nodes.push_back({n.id, n.room_type, n.pixel_area});
    std::vector<GraphEdge> edges = g1.edges();

    auto find_node = [&](int id) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].id == id) return static_cast<int>(i);
        }
        throw Error("apply_edit_path: missing node " + std::to_string(id));
    };
    auto find_edge = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (edges[i].a == a && edges[i].b == b) return static_cast<int>(i);
        }
        return -1;
    };

    for (const EditOp& op : path.ops) {
        switch (op.kind) {
        case EditOpKind::NodeSubstitute:
            nodes[find_node(op.a)].label = op.label;
            break;
        case EditOpKind::NodeDelete: {
            int pos = find_node(op.a);
            nodes.erase(nodes.begin() + pos);
            edges.erase(std::remove_if(edges.begin(), edges.end(),
                                       [&](const GraphEdge& e) { return e.a == op.a || e.b == op.a; }),
                        edges.end());
            break;
        }
        case EditOpKind::NodeInsert:
            nodes.push_back({op.a, op.label, 0});
            break;
        case EditOpKind::EdgeDelete: {
            int pos = find_edge(op.a, op.b);
            if (pos < 0) throw Error("apply_edit_path: missing edge");
            edges.erase(edges.begin() + pos);
            break;
        }
        case EditOpKind::EdgeInsert: {
            GraphEdge e;
            e.a = std::min(op.a, op.b);
            e.b = std::max(op.a, op.b);
            e.connectivity = op.connectivity;
            edges.push_back(e);
            break;
        }
        case EditOpKind::EdgeSubstitute: {
            int pos = find_edge(op.a, op.b);
            if (pos < 0) throw Error("apply_edit_path: missing edge");
            edges[pos].connectivity = op.connectivity;
            break;
        }
        }
    }

    std::vector<GraphNode> final_nodes;
    for (const WorkNode& n : nodes) final_nodes.push_back({n.id, n.label, n.pixel_area});
    return AccessGraph(std::move(final_nodes), std::move(edges));
}

std::string GedMemo::pair_key(const std::string& key1, const std::string& key2) {
    return key1 <= key2 ? key1 + "|" + key2 : key2 + "|" + key1;
}

std::string GedMemo::pair_key(const AccessGraph& g1, const AccessGraph& g2, bool attribute_aware) {
    return pair_key(canonical_key(g1, attribute_aware), canonical_key(g2, attribute_aware));
}

std::optional<GedMemo::Entry> GedMemo::find(const std::string& key) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void GedMemo::insert(const std::string& key, Entry entry) {
    std::unique_lock lock(mutex_);
    entries_[key] = entry;
}

std::size_t GedMemo::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

} // namespace fpsim
