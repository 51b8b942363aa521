#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpsim/extract.hpp"
#include "testutil.hpp"

using namespace fpsim;
using namespace fpsim::testutil;

namespace {

// Two rooms (cols 1-3 and 5-7) split by a 1-px wall at col 4, inside a
// 9x5 canvas with a background border.
SemanticImage two_room_image(bool with_door) {
    SemanticImage image(9, 5, kBackground);
    for (int y = 1; y <= 3; ++y) {
        for (int x = 1; x <= 3; ++x) image.set(x, y, 3);
        image.set(4, y, kWall);
        for (int x = 5; x <= 7; ++x) image.set(x, y, 4);
    }
    if (with_door) image.set(4, 2, kDoor);
    return image;
}

} // namespace

TEST_CASE("label_components: uniform image is one component") {
    SemanticImage image(4, 4, 3);
    ComponentLabeling labeling = label_components(image, {Role::Area}, fixture_categories());
    REQUIRE(labeling.components.size() == 1);
    CHECK(labeling.components[0].pixel_count == 16);
    CHECK(labeling.components[0].category == 3);
    CHECK(labeling.components[0].min_x == 0);
    CHECK(labeling.components[0].max_x == 3);
    for (int id : labeling.component_ids) CHECK(id == 1);
}

TEST_CASE("label_components: diagonal blocks stay separate under 4-connectivity") {
    SemanticImage image(4, 4, kBackground);
    image.set(0, 0, 3);
    image.set(1, 0, 3);
    image.set(0, 1, 3);
    image.set(1, 1, 3);
    image.set(2, 2, 3);
    image.set(3, 2, 3);
    image.set(2, 3, 3);
    image.set(3, 3, 3);
    ComponentLabeling labeling = label_components(image, {Role::Area}, fixture_categories());
    REQUIRE(labeling.components.size() == 2);
    CHECK(labeling.components[0].pixel_count == 4);
    CHECK(labeling.components[1].pixel_count == 4);
}

TEST_CASE("label_components: checkerboard of two area classes") {
    SemanticImage image(4, 4, 3);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
            image.set(x, y, (x + y) % 2 == 0 ? 3 : 4);
        }
    }
    ComponentLabeling labeling = label_components(image, {Role::Area}, fixture_categories());
    CHECK(labeling.components.size() == 16); // every pixel its own component
    for (const ComponentInfo& c : labeling.components) CHECK(c.pixel_count == 1);
}

TEST_CASE("label_components: role filter and empty roles") {
    SemanticImage image = two_room_image(true);
    ComponentLabeling openings = label_components(image, {Role::Opening}, fixture_categories());
    REQUIRE(openings.components.size() == 1);
    CHECK(openings.components[0].category == kDoor);
    CHECK(openings.components[0].pixel_count == 1);
    CHECK_THROWS_AS(label_components(image, {}, fixture_categories()), Error);
}

TEST_CASE("extract: door between two rooms") {
    AccessGraph graph = extract_access_graph(two_room_image(true), fixture_categories());
    REQUIRE(graph.order() == 2);
    CHECK(graph.node(0).room_type == 3);
    CHECK(graph.node(1).room_type == 4);
    CHECK(graph.node(0).pixel_area == 9);
    REQUIRE(graph.edges().size() == 1);
    CHECK(graph.edges()[0].connectivity == Connectivity::Door); // door wins over adjacency
}

TEST_CASE("extract: bare wall gives an adjacent edge") {
    AccessGraph graph = extract_access_graph(two_room_image(false), fixture_categories());
    REQUIRE(graph.order() == 2);
    REQUIRE(graph.edges().size() == 1);
    CHECK(graph.edges()[0].connectivity == Connectivity::Adjacent);
}

TEST_CASE("extract: three rooms in a row form a door path") {
    // 12x4: walls at cols 0, 3, 8, 11 and rows 0, 3; rooms at cols 1-2,
    // 4-7, 9-10; doors punched through the interior walls. Rooms 1 and 3
    // sit 7 columns apart, past the adjacency gap.
    SemanticImage image(12, 4, kBackground);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 12; ++x) image.set(x, y, kWall);
    }
    for (int y = 1; y <= 2; ++y) {
        for (int x = 1; x <= 2; ++x) image.set(x, y, 3);
        for (int x = 4; x <= 7; ++x) image.set(x, y, 4);
        for (int x = 9; x <= 10; ++x) image.set(x, y, 5);
    }
    image.set(3, 1, kDoor);
    image.set(3, 2, kDoor);
    image.set(8, 1, kDoor);
    image.set(8, 2, kDoor);

    AccessGraph graph = extract_access_graph(image, fixture_categories());
    REQUIRE(graph.order() == 3);
    CHECK(graph.node(0).room_type == 3);
    CHECK(graph.node(1).room_type == 4);
    CHECK(graph.node(2).room_type == 5);
    REQUIRE(graph.edges().size() == 2);
    CHECK(graph.edge_between(0, 1) == Connectivity::Door);
    CHECK(graph.edge_between(1, 2) == Connectivity::Door);
    CHECK(!graph.edge_between(0, 2).has_value());
}

TEST_CASE("extract: opening touching a single room makes no edge") {
    SemanticImage image = two_room_image(false);
    image.set(0, 2, kDoor); // exterior door on the outer background
    AccessGraph graph = extract_access_graph(image, fixture_categories());
    REQUIRE(graph.order() == 2);
    REQUIRE(graph.edges().size() == 1);
    CHECK(graph.edges()[0].connectivity == Connectivity::Adjacent);
}

TEST_CASE("extract: rooms below min_room_area are noise") {
    SemanticImage image = two_room_image(true);
    image.set(8, 4, 5); // 1-px blob in the corner
    AccessGraph graph = extract_access_graph(image, fixture_categories());
    CHECK(graph.order() == 2);

    ExtractionParams params;
    params.min_room_area = 1;
    AccessGraph with_blob = extract_access_graph(image, fixture_categories(), params);
    CHECK(with_blob.order() == 3);
}

TEST_CASE("extract: no rooms at all") {
    SemanticImage image(4, 4, kBackground);
    CHECK_THROWS_AS(extract_access_graph(image, fixture_categories()), NoRooms);
}

TEST_CASE("extract: adjacency gap is respected") {
    // two rooms with a 7-px wall slab between them: farther than the gap
    SemanticImage image(16, 5, kBackground);
    for (int y = 1; y <= 3; ++y) {
        for (int x = 1; x <= 3; ++x) image.set(x, y, 3);
        for (int x = 4; x <= 10; ++x) image.set(x, y, kWall);
        for (int x = 11; x <= 13; ++x) image.set(x, y, 4);
    }
    AccessGraph far_apart = extract_access_graph(image, fixture_categories());
    CHECK(far_apart.order() == 2);
    CHECK(far_apart.edges().empty());

    ExtractionParams wide;
    wide.adjacency_gap = 8;
    AccessGraph bridged = extract_access_graph(image, fixture_categories(), wide);
    CHECK(bridged.edges().size() == 1);
}

TEST_CASE("extract: determinism and node ordering") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 10; ++round) {
        SemanticImage image = render_grid_plan(rng, 48);
        AccessGraph first = extract_access_graph(image, fixture_categories());
        AccessGraph second = extract_access_graph(image, fixture_categories());
        CHECK(first.to_json().dump() == second.to_json().dump());

        // node count equals surviving area component count
        ComponentLabeling rooms = label_components(image, {Role::Area}, fixture_categories());
        int expected = 0;
        for (const ComponentInfo& c : rooms.components) {
            if (c.pixel_count >= ExtractionParams{}.min_room_area) ++expected;
        }
        CHECK(first.order() == expected);

        // no pair carries both door and adjacent: enforced by construction,
        // but assert symmetry + dedup via the edge list itself
        std::set<std::pair<int, int>> seen;
        for (const GraphEdge& e : first.edges()) {
            CHECK(seen.emplace(std::min(e.a, e.b), std::max(e.a, e.b)).second);
        }
    }
}
