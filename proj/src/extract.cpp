#include "fpsim/extract.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <utility>

#include "fpsim/errors.hpp"

namespace fpsim {

namespace {

constexpr int kStep4X[4] = {1, -1, 0, 0};
constexpr int kStep4Y[4] = {0, 0, 1, -1};

constexpr int kStep8X[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kStep8Y[8] = {0, 0, 1, -1, 1, -1, 1, -1};

std::array<bool, 256> role_mask(const CategoryMap& categories, const std::set<Role>& roles) {
    std::array<bool, 256> mask{};
    for (const CategoryEntry& e : categories.entries()) {
        if (roles.count(e.role)) mask[e.code] = true;
    }
    return mask;
}

} // namespace

ComponentLabeling label_components(const SemanticImage& image, const std::set<Role>& roles,
                                   const CategoryMap& categories) {
    if (roles.empty()) throw Error("label_components: roles must be non-empty");

    const int w = image.width;
    const int h = image.height;
    const std::array<bool, 256> selected = role_mask(categories, roles);

    ComponentLabeling out;
    out.width = w;
    out.height = h;
    out.component_ids.assign(static_cast<std::size_t>(w) * h, 0);

    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::size_t idx = image.index(x, y);
            CategoryCode code = image.labels[idx];
            if (!selected[code] || out.component_ids[idx] != 0) continue;

            int comp_id = static_cast<int>(out.components.size()) + 1;
            ComponentInfo info;
            info.id = comp_id;
            info.category = code;
            info.min_x = info.max_x = x;
            info.min_y = info.max_y = y;

            out.component_ids[idx] = comp_id;
            queue.emplace_back(x, y);
            while (!queue.empty()) {
                auto [cx, cy] = queue.front();
                queue.pop_front();
                ++info.pixel_count;
                info.min_x = std::min(info.min_x, cx);
                info.max_x = std::max(info.max_x, cx);
                info.min_y = std::min(info.min_y, cy);
                info.max_y = std::max(info.max_y, cy);
                for (int d = 0; d < 4; ++d) {
                    int nx = cx + kStep4X[d];
                    int ny = cy + kStep4Y[d];
                    if (!image.in_bounds(nx, ny)) continue;
                    std::size_t nidx = image.index(nx, ny);
                    if (out.component_ids[nidx] != 0 || image.labels[nidx] != code) continue;
                    out.component_ids[nidx] = comp_id;
                    queue.emplace_back(nx, ny);
                }
            }
            out.components.push_back(info);
        }
    }
    return out;
}

AccessGraph extract_access_graph(const SemanticImage& image, const CategoryMap& categories,
                                 const ExtractionParams& params) {
    const int w = image.width;
    const int h = image.height;

    ComponentLabeling rooms = label_components(image, {Role::Area}, categories);

    // Component id -> node id, or -1 for components dropped as noise.
    std::vector<int> node_of_component(rooms.components.size() + 1, -1);
    AccessGraph graph;
    std::vector<std::vector<std::pair<int, int>>> node_pixels;
    for (const ComponentInfo& comp : rooms.components) {
        if (comp.pixel_count < params.min_room_area) continue;
        int id = graph.add_node(comp.category, comp.pixel_count);
        node_of_component[comp.id] = id;
        node_pixels.emplace_back();
    }
    if (graph.order() == 0) throw NoRooms("extract_access_graph: no rooms above min_room_area");

    std::vector<int> node_at_pixel(static_cast<std::size_t>(w) * h, -1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int comp = rooms.component_ids[image.index(x, y)];
            if (comp == 0) continue;
            int node = node_of_component[comp];
            if (node < 0) continue;
            node_at_pixel[image.index(x, y)] = node;
            node_pixels[node].emplace_back(x, y);
        }
    }

    std::set<std::pair<int, int>> door_pairs;
    std::set<std::pair<int, int>> adjacent_pairs;

    // Door edges: Chebyshev-dilate every opening component by door_reach and
    // collect the rooms the dilated region touches.
    ComponentLabeling openings = label_components(image, {Role::Opening}, categories);
    {
        std::vector<int> depth(static_cast<std::size_t>(w) * h, -1);
        std::deque<std::pair<int, int>> queue;
        for (const ComponentInfo& opening : openings.components) {
            std::fill(depth.begin(), depth.end(), -1);
            queue.clear();
            std::vector<int> reached;

            for (int y = opening.min_y; y <= opening.max_y; ++y) {
                for (int x = opening.min_x; x <= opening.max_x; ++x) {
                    if (openings.component_ids[image.index(x, y)] != opening.id) continue;
                    depth[image.index(x, y)] = 0;
                    queue.emplace_back(x, y);
                }
            }
            while (!queue.empty()) {
                auto [cx, cy] = queue.front();
                queue.pop_front();
                int d = depth[image.index(cx, cy)];
                int node = node_at_pixel[image.index(cx, cy)];
                if (node >= 0 &&
                    std::find(reached.begin(), reached.end(), node) == reached.end()) {
                    reached.push_back(node);
                }
                if (d == params.door_reach) continue;
                for (int k = 0; k < 8; ++k) {
                    int nx = cx + kStep8X[k];
                    int ny = cy + kStep8Y[k];
                    if (!image.in_bounds(nx, ny)) continue;
                    std::size_t nidx = image.index(nx, ny);
                    if (depth[nidx] != -1) continue;
                    depth[nidx] = d + 1;
                    queue.emplace_back(nx, ny);
                }
            }
            std::sort(reached.begin(), reached.end());
            for (std::size_t i = 0; i < reached.size(); ++i) {
                for (std::size_t j = i + 1; j < reached.size(); ++j) {
                    door_pairs.emplace(reached[i], reached[j]);
                }
            }
        }
    }

    // Adjacency: BFS outward from each room through separator/background
    // pixels only, up to adjacency_gap steps (8-connected, so step count is
    // Chebyshev distance in free space).
    if (params.adjacency_gap > 0) {
        std::array<bool, 256> traversable = role_mask(categories, {Role::Separator, Role::Background});
        std::vector<int> depth(static_cast<std::size_t>(w) * h, -1);
        std::deque<std::pair<int, int>> queue;
        for (int node = 0; node < graph.order(); ++node) {
            std::fill(depth.begin(), depth.end(), -1);
            queue.clear();
            for (auto [x, y] : node_pixels[node]) {
                depth[image.index(x, y)] = 0;
                queue.emplace_back(x, y);
            }
            while (!queue.empty()) {
                auto [cx, cy] = queue.front();
                queue.pop_front();
                int d = depth[image.index(cx, cy)];
                if (d == params.adjacency_gap) continue;
                for (int k = 0; k < 8; ++k) {
                    int nx = cx + kStep8X[k];
                    int ny = cy + kStep8Y[k];
                    if (!image.in_bounds(nx, ny)) continue;
                    std::size_t nidx = image.index(nx, ny);
                    if (depth[nidx] != -1) continue;
                    int other = node_at_pixel[nidx];
                    if (other >= 0) {
                        if (other != node) {
                            adjacent_pairs.emplace(std::min(node, other), std::max(node, other));
                        }
                        continue; // rooms are not traversable
                    }
                    if (!traversable[image.labels[nidx]]) continue;
                    depth[nidx] = d + 1;
                    queue.emplace_back(nx, ny);
                }
            }
        }
    }

    for (const auto& [a, b] : door_pairs) {
        graph.add_edge(a, b, Connectivity::Door);
    }
    for (const auto& [a, b] : adjacent_pairs) {
        if (door_pairs.count({a, b})) continue; // door takes precedence
        graph.add_edge(a, b, Connectivity::Adjacent);
    }
    return graph;
}

} // namespace fpsim
