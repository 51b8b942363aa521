#ifndef FPSIM_EXTRACT_HPP
#define FPSIM_EXTRACT_HPP

#include <set>
#include <vector>

#include "fpsim/core.hpp"

namespace fpsim {

struct ExtractionParams {
    /// Chebyshev dilation radius around an opening component; rooms inside
    /// the dilated region are considered connected by that opening.
    int door_reach = 2;
    /// Maximum pixel gap between two room boundaries, measured through
    /// separator/background pixels, for an "adjacent" edge.
    int adjacency_gap = 6;
    /// Components below this pixel count are treated as segmentation noise.
    int min_room_area = 4;
};

struct ComponentInfo {
    int id = 0; // dense from 1
    CategoryCode category = 0;
    int pixel_count = 0;
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

/// Per-pixel component ids (0 = not part of any selected component) plus the
/// component summaries in discovery (raster-scan) order.
struct ComponentLabeling {
    int width = 0;
    int height = 0;
    std::vector<int> component_ids;
    std::vector<ComponentInfo> components;
};

/// Maximal 4-connected regions of equal category code, restricted to pixels
/// whose category role is in `roles`.
ComponentLabeling label_components(const SemanticImage& image, const std::set<Role>& roles,
                                   const CategoryMap& categories);

/// Rooms become nodes (raster-scan discovery order, ids dense from 0); door
/// edges come from opening components reaching two or more rooms, adjacency
/// edges from room boundaries within `adjacency_gap` of each other across
/// separator/background pixels. Door wins when both apply.
AccessGraph extract_access_graph(const SemanticImage& image, const CategoryMap& categories,
                                 const ExtractionParams& params = {});

} // namespace fpsim

#endif
