#include "fpsim/core.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace fpsim {

std::string_view role_name(Role role) {
    switch (role) {
    case Role::Area: return "area";
    case Role::Opening: return "opening";
    case Role::Separator: return "separator";
    case Role::Background: return "background";
    }
    throw Error("invalid role");
}

Role role_from_name(std::string_view name) {
    if (name == "area") return Role::Area;
    if (name == "opening") return Role::Opening;
    if (name == "separator") return Role::Separator;
    if (name == "background") return Role::Background;
    throw Error("unknown role name: " + std::string(name));
}

std::string_view connectivity_name(Connectivity c) {
    return c == Connectivity::Door ? "door" : "adjacent";
}

Connectivity connectivity_from_name(std::string_view name) {
    if (name == "door") return Connectivity::Door;
    if (name == "adjacent") return Connectivity::Adjacent;
    throw Error("unknown connectivity: " + std::string(name));
}

CategoryMap::CategoryMap(std::vector<CategoryEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const CategoryEntry& l, const CategoryEntry& r) { return l.code < r.code; });
    index_.fill(-1);
    int backgrounds = 0;
    int areas = 0;
    int openings = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const CategoryEntry& e = entries_[i];
        if (index_[e.code] >= 0) {
            throw Error("CategoryMap: duplicate code " + std::to_string(int(e.code)));
        }
        index_[e.code] = static_cast<std::int16_t>(i);
        switch (e.role) {
        case Role::Background:
            ++backgrounds;
            background_ = e.code;
            break;
        case Role::Area: ++areas; break;
        case Role::Opening: ++openings; break;
        case Role::Separator: break;
        }
    }
    if (backgrounds != 1) {
        throw Error("CategoryMap: exactly one background code required, got " + std::to_string(backgrounds));
    }
    if (areas < 1) throw Error("CategoryMap: at least one area code required");
    if (openings < 1) throw Error("CategoryMap: at least one opening code required");
}

CategoryMap CategoryMap::from_json(const nlohmann::json& doc) {
    std::vector<CategoryEntry> entries;
    for (const auto& item : doc.at("categories")) {
        CategoryEntry e;
        int code = item.at("code").get<int>();
        if (code < 0 || code > 255) throw Error("CategoryMap: code out of byte range");
        e.code = static_cast<CategoryCode>(code);
        e.name = item.at("name").get<std::string>();
        e.role = role_from_name(item.at("role").get<std::string>());
        entries.push_back(std::move(e));
    }
    return CategoryMap(std::move(entries));
}

nlohmann::json CategoryMap::to_json() const {
    nlohmann::json cats = nlohmann::json::array();
    for (const CategoryEntry& e : entries_) {
        cats.push_back({{"code", int(e.code)}, {"name", e.name}, {"role", std::string(role_name(e.role))}});
    }
    return nlohmann::json{{"categories", cats}};
}

CategoryMap CategoryMap::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open category map: " + file.string());
    nlohmann::json doc;
    in >> doc;
    return from_json(doc);
}

void CategoryMap::save(const std::filesystem::path& file) const {
    std::ofstream out(file);
    if (!out) throw Error("cannot write category map: " + file.string());
    out << to_json().dump(2) << "\n";
}

CategoryMap CategoryMap::rplan_default() {
    std::vector<CategoryEntry> entries = {
        {0, "living_room", Role::Area},
        {1, "master_room", Role::Area},
        {2, "kitchen", Role::Area},
        {3, "bathroom", Role::Area},
        {4, "dining_room", Role::Area},
        {5, "child_room", Role::Area},
        {6, "study_room", Role::Area},
        {7, "second_room", Role::Area},
        {8, "guest_room", Role::Area},
        {9, "balcony", Role::Area},
        {10, "entrance", Role::Area},
        {11, "storage", Role::Area},
        {12, "wall_in", Role::Area},
        {13, "external_area", Role::Background},
        {14, "exterior_wall", Role::Separator},
        {15, "front_door", Role::Opening},
        {16, "interior_wall", Role::Separator},
        {17, "interior_door", Role::Opening},
    };
    return CategoryMap(std::move(entries));
}

bool CategoryMap::contains(CategoryCode code) const { return index_[code] >= 0; }

Role CategoryMap::role_of(CategoryCode code) const {
    if (!contains(code)) throw UnknownLabel("label " + std::to_string(int(code)) + " not in category map");
    return entries_[index_[code]].role;
}

const std::string& CategoryMap::name_of(CategoryCode code) const {
    if (!contains(code)) throw UnknownLabel("label " + std::to_string(int(code)) + " not in category map");
    return entries_[index_[code]].name;
}

std::vector<CategoryCode> CategoryMap::codes_with_role(Role role) const {
    std::vector<CategoryCode> out;
    for (const CategoryEntry& e : entries_) {
        if (e.role == role) out.push_back(e.code);
    }
    return out;
}

SemanticImage::SemanticImage(int w, int h, CategoryCode fill)
    : width(w), height(h), labels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {
    if (w <= 0 || h <= 0) throw Error("SemanticImage: dimensions must be positive");
}

AccessGraph::AccessGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges) {
    std::sort(nodes.begin(), nodes.end(),
              [](const GraphNode& l, const GraphNode& r) { return l.id < r.id; });
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (nodes[i].id == nodes[i - 1].id) {
            throw Error("AccessGraph: duplicate node id " + std::to_string(nodes[i].id));
        }
    }
    nodes_ = std::move(nodes);
    for (const GraphEdge& e : edges) {
        add_edge(e.a, e.b, e.connectivity);
    }
}

int AccessGraph::add_node(CategoryCode room_type, int pixel_area) {
    int id = nodes_.empty() ? 0 : nodes_.back().id + 1;
    nodes_.push_back({id, room_type, pixel_area});
    return id;
}

int AccessGraph::node_pos(int id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const GraphNode& n, int v) { return n.id < v; });
    if (it == nodes_.end() || it->id != id) return -1;
    return static_cast<int>(it - nodes_.begin());
}

bool AccessGraph::has_node(int id) const { return node_pos(id) >= 0; }

const GraphNode& AccessGraph::node(int id) const {
    int pos = node_pos(id);
    if (pos < 0) throw Error("AccessGraph: no node with id " + std::to_string(id));
    return nodes_[pos];
}

void AccessGraph::add_edge(int a, int b, Connectivity connectivity) {
    if (a == b) throw Error("AccessGraph: self loop on node " + std::to_string(a));
    if (!has_node(a) || !has_node(b)) {
        throw Error("AccessGraph: edge references missing node (" + std::to_string(a) + "," +
                    std::to_string(b) + ")");
    }
    if (a > b) std::swap(a, b);
    if (edge_between(a, b)) {
        throw Error("AccessGraph: duplicate edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
    edges_.push_back({a, b, connectivity});
}

std::optional<Connectivity> AccessGraph::edge_between(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (const GraphEdge& e : edges_) {
        if (e.a == a && e.b == b) return e.connectivity;
    }
    return std::nullopt;
}

int AccessGraph::degree(int id) const {
    int d = 0;
    for (const GraphEdge& e : edges_) {
        if (e.a == id || e.b == id) ++d;
    }
    return d;
}

bool AccessGraph::door_connected() const {
    if (nodes_.size() <= 1) return true;
    // union-find over door edges only
    std::vector<int> parent(nodes_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const GraphEdge& e : edges_) {
        if (e.connectivity != Connectivity::Door) continue;
        int ra = find(node_pos(e.a));
        int rb = find(node_pos(e.b));
        if (ra != rb) parent[ra] = rb;
    }
    int root = find(0);
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (find(static_cast<int>(i)) != root) return false;
    }
    return true;
}

nlohmann::json AccessGraph::to_json() const {
    nlohmann::json nodes = nlohmann::json::array();
    for (const GraphNode& n : nodes_) {
        nodes.push_back({{"id", n.id}, {"room_type", int(n.room_type)}, {"pixel_area", n.pixel_area}});
    }
    std::vector<GraphEdge> sorted = edges_;
    std::sort(sorted.begin(), sorted.end(), [](const GraphEdge& l, const GraphEdge& r) {
        return std::tie(l.a, l.b) < std::tie(r.a, r.b);
    });
    nlohmann::json edges = nlohmann::json::array();
    for (const GraphEdge& e : sorted) {
        edges.push_back(
            {{"a", e.a}, {"b", e.b}, {"connectivity", std::string(connectivity_name(e.connectivity))}});
    }
    return nlohmann::json{{"nodes", nodes}, {"edges", edges}};
}

AccessGraph AccessGraph::from_json(const nlohmann::json& doc) {
    std::vector<GraphNode> nodes;
    for (const auto& item : doc.at("nodes")) {
        GraphNode n;
        n.id = item.at("id").get<int>();
        int rt = item.at("room_type").get<int>();
        if (rt < 0 || rt > 255) throw Error("AccessGraph: room_type out of byte range");
        n.room_type = static_cast<CategoryCode>(rt);
        n.pixel_area = item.value("pixel_area", 0);
        nodes.push_back(n);
    }
    std::vector<GraphEdge> edges;
    for (const auto& item : doc.at("edges")) {
        GraphEdge e;
        e.a = item.at("a").get<int>();
        e.b = item.at("b").get<int>();
        e.connectivity = connectivity_from_name(item.at("connectivity").get<std::string>());
        edges.push_back(e);
    }
    return AccessGraph(std::move(nodes), std::move(edges));
}

AccessGraph AccessGraph::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open graph file: " + file.string());
    nlohmann::json doc;
    in >> doc;
    return from_json(doc);
}

void AccessGraph::save(const std::filesystem::path& file) const {
    std::ofstream out(file);
    if (!out) throw Error("cannot write graph file: " + file.string());
    out << to_json().dump(2) << "\n";
}

PairKey make_pair_key(std::string_view id1, std::string_view id2) {
    if (id2 < id1) std::swap(id1, id2);
    return PairKey{std::string(id1), std::string(id2)};
}

std::vector<std::string> validate_floor_plan(const FloorPlan& plan, const CategoryMap& categories) {
    std::vector<std::string> report;

    if (plan.image.width <= 0 || plan.image.height <= 0) {
        report.push_back("image: width and height must be positive");
    }
    if (plan.image.labels.size() !=
        static_cast<std::size_t>(plan.image.width) * static_cast<std::size_t>(plan.image.height)) {
        report.push_back("image: label buffer size does not match dimensions");
    }

    std::set<int> unknown;
    bool any_area_pixel = false;
    std::array<bool, 256> known{};
    std::array<bool, 256> is_area{};
    for (const CategoryEntry& e : categories.entries()) {
        known[e.code] = true;
        is_area[e.code] = (e.role == Role::Area);
    }
    std::array<bool, 256> area_label_present{};
    for (CategoryCode code : plan.image.labels) {
        if (!known[code]) {
            unknown.insert(int(code));
        } else if (is_area[code]) {
            any_area_pixel = true;
            area_label_present[code] = true;
        }
    }
    for (int code : unknown) {
        report.push_back("image: label " + std::to_string(code) + " not present in category map");
    }
    if (!any_area_pixel) {
        report.push_back("image: no area-role pixels (plan has zero rooms)");
    }

    if (plan.graph.order() < 1) {
        report.push_back("graph: no nodes (plan has zero rooms)");
    } else if (!plan.graph.door_connected()) {
        // list the rooms unreachable from the lowest node id through doors
        const auto& nodes = plan.graph.nodes();
        std::vector<int> reach;
        std::set<int> seen{nodes.front().id};
        reach.push_back(nodes.front().id);
        while (!reach.empty()) {
            int cur = reach.back();
            reach.pop_back();
            for (const GraphEdge& e : plan.graph.edges()) {
                if (e.connectivity != Connectivity::Door) continue;
                int other = -1;
                if (e.a == cur) other = e.b;
                else if (e.b == cur) other = e.a;
                else continue;
                if (seen.insert(other).second) reach.push_back(other);
            }
        }
        std::string ids;
        for (const GraphNode& n : nodes) {
            if (seen.count(n.id)) continue;
            if (!ids.empty()) ids += ",";
            ids += std::to_string(n.id);
        }
        report.push_back("graph: door subgraph not connected; unreachable nodes: " + ids);
    }

    for (const GraphNode& n : plan.graph.nodes()) {
        if (!known[n.room_type]) {
            report.push_back("graph: node " + std::to_string(n.id) + " room_type " +
                             std::to_string(int(n.room_type)) + " not present in category map");
        } else if (!area_label_present[n.room_type]) {
            report.push_back("plan: node " + std::to_string(n.id) + " room_type " +
                             std::to_string(int(n.room_type)) + " does not appear as an area label in the image");
        }
    }

    return report;
}

} // namespace fpsim
