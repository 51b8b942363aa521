#ifndef FPSIM_CORE_HPP
#define FPSIM_CORE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fpsim/errors.hpp"

namespace fpsim {

/// Pixel label in a semantic image. Values index into a CategoryMap.
using CategoryCode = std::uint8_t;

/// What a subdivision category stands for in a floor plan.
enum class Role { Area, Opening, Separator, Background };

std::string_view role_name(Role role);
Role role_from_name(std::string_view name);

struct CategoryEntry {
    CategoryCode code = 0;
    std::string name;
    Role role = Role::Area;
};

/// Maps raster label values to category names and roles. Immutable after
/// construction; construction enforces unique codes, exactly one background
/// code, and at least one area and one opening code.
class CategoryMap {
public:
    explicit CategoryMap(std::vector<CategoryEntry> entries);

    static CategoryMap load(const std::filesystem::path& file);
    static CategoryMap from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
    void save(const std::filesystem::path& file) const;

    /// Default label assignment for RPLAN-style rasters. Shipped as data in
    /// data/rplan_categories.json as well; this mirrors that file.
    static CategoryMap rplan_default();

    bool contains(CategoryCode code) const;
    Role role_of(CategoryCode code) const; // throws UnknownLabel
    const std::string& name_of(CategoryCode code) const; // throws UnknownLabel
    CategoryCode background() const { return background_; }
    std::vector<CategoryCode> codes_with_role(Role role) const;
    const std::vector<CategoryEntry>& entries() const { return entries_; }

private:
    std::vector<CategoryEntry> entries_; // sorted by code
    std::array<std::int16_t, 256> index_; // code -> entry position, -1 if absent
    CategoryCode background_ = 0;
};

/// H x W raster of per-pixel category codes, row-major.
struct SemanticImage {
    int width = 0;
    int height = 0;
    std::vector<CategoryCode> labels;

    SemanticImage() = default;
    SemanticImage(int w, int h, CategoryCode fill = 0);

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
    }
    CategoryCode at(int x, int y) const { return labels[index(x, y)]; }
    void set(int x, int y, CategoryCode code) { labels[index(x, y)] = code; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    bool same_shape(const SemanticImage& other) const {
        return width == other.width && height == other.height;
    }
    std::size_t pixel_count() const { return labels.size(); }
};

enum class Connectivity : std::uint8_t { Door, Adjacent };

std::string_view connectivity_name(Connectivity c);
Connectivity connectivity_from_name(std::string_view name);

struct GraphNode {
    int id = 0;
    CategoryCode room_type = 0;
    int pixel_area = 0;
};

struct GraphEdge {
    int a = 0;
    int b = 0;
    Connectivity connectivity = Connectivity::Door;
};

/// Attributed graph of rooms. Nodes carry a room-type label, edges are either
/// "door" or "adjacent". Construction enforces unique node ids, valid edge
/// endpoints, no self loops and at most one edge per unordered pair. Door
/// connectivity is a cleaning rule checked by validate_floor_plan, not a
/// structural invariant.
class AccessGraph {
public:
    AccessGraph() = default;
    AccessGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges);

    /// Appends a node with the next free id; returns the id.
    int add_node(CategoryCode room_type, int pixel_area = 0);
    void add_edge(int a, int b, Connectivity connectivity);

    int order() const { return static_cast<int>(nodes_.size()); }
    const std::vector<GraphNode>& nodes() const { return nodes_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    bool has_node(int id) const;
    const GraphNode& node(int id) const;
    std::optional<Connectivity> edge_between(int a, int b) const;
    int degree(int id) const;

    /// True when every node is reachable from every other through door edges
    /// alone. Vacuously true for graphs of order 0 or 1.
    bool door_connected() const;

    nlohmann::json to_json() const;
    static AccessGraph from_json(const nlohmann::json& doc);
    static AccessGraph load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;

private:
    int node_pos(int id) const;

    std::vector<GraphNode> nodes_; // sorted by id
    std::vector<GraphEdge> edges_; // endpoints normalized a < b
};

/// Identity plus both modalities of one floor plan.
struct FloorPlan {
    std::string id;
    SemanticImage image;
    AccessGraph graph;
};

/// Canonically ordered id pair: first < second lexicographically.
struct PairKey {
    std::string a;
    std::string b;

    bool operator==(const PairKey&) const = default;
    auto operator<=>(const PairKey&) const = default;
};

PairKey make_pair_key(std::string_view id1, std::string_view id2);

/// One row of the score cache. Fields fill in as pipeline stages run.
struct PairScore {
    std::string id_a;
    std::string id_b;
    std::optional<double> miou;
    std::optional<int> ged;
    std::optional<double> nged;
    std::optional<double> ssig;
    std::optional<bool> approx;
};

/// Checks a plan against all cleaning rules. Violations come back as stable,
/// human-readable strings; an empty report means the plan is valid. Pure:
/// identical inputs produce byte-identical reports.
std::vector<std::string> validate_floor_plan(const FloorPlan& plan, const CategoryMap& categories);

} // namespace fpsim

#endif
