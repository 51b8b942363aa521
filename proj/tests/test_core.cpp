#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpsim/core.hpp"
#include "testutil.hpp"

using namespace fpsim;
using namespace fpsim::testutil;

TEST_CASE("category map enforces its invariants") {
    CHECK_THROWS_AS(CategoryMap({{0, "a", Role::Area},
                                 {0, "b", Role::Background},
                                 {2, "c", Role::Opening}}),
                    Error); // duplicate code
    CHECK_THROWS_AS(CategoryMap({{0, "a", Role::Area}, {1, "d", Role::Opening}}),
                    Error); // no background
    CHECK_THROWS_AS(CategoryMap({{0, "a", Role::Background},
                                 {1, "b", Role::Background},
                                 {2, "c", Role::Area},
                                 {3, "d", Role::Opening}}),
                    Error); // two backgrounds
    CHECK_THROWS_AS(CategoryMap({{0, "bg", Role::Background}, {1, "d", Role::Opening}}),
                    Error); // no area
    CHECK_THROWS_AS(CategoryMap({{0, "bg", Role::Background}, {1, "a", Role::Area}}),
                    Error); // no opening

    CategoryMap map = fixture_categories();
    CHECK(map.background() == 0);
    CHECK(map.role_of(kWall) == Role::Separator);
    CHECK(map.role_of(kDoor) == Role::Opening);
    CHECK(map.name_of(3) == "living");
    CHECK(!map.contains(200));
    CHECK_THROWS_AS(map.role_of(200), UnknownLabel);
    CHECK(map.codes_with_role(Role::Area).size() == 6);
}

TEST_CASE("category map json round trip") {
    CategoryMap map = CategoryMap::rplan_default();
    CategoryMap again = CategoryMap::from_json(map.to_json());
    CHECK(again.entries().size() == map.entries().size());
    CHECK(again.background() == map.background());
    for (const CategoryEntry& e : map.entries()) {
        CHECK(again.role_of(e.code) == e.role);
        CHECK(again.name_of(e.code) == e.name);
    }
}

TEST_CASE("access graph structural invariants") {
    AccessGraph g;
    int a = g.add_node(3, 10);
    int b = g.add_node(4, 12);
    CHECK(a == 0);
    CHECK(b == 1);
    g.add_edge(a, b, Connectivity::Door);

    CHECK_THROWS_AS(g.add_edge(a, a, Connectivity::Door), Error);     // self loop
    CHECK_THROWS_AS(g.add_edge(b, a, Connectivity::Adjacent), Error); // duplicate pair
    CHECK_THROWS_AS(g.add_edge(a, 7, Connectivity::Door), Error);     // missing node

    CHECK(g.edge_between(a, b) == Connectivity::Door);
    CHECK(g.edge_between(b, a) == Connectivity::Door);
    CHECK(!g.edge_between(a, 2).has_value());

    CHECK_THROWS_AS(AccessGraph({{0, 3, 1}, {0, 4, 1}}, {}), Error); // duplicate id
}

TEST_CASE("door connectivity") {
    AccessGraph g;
    g.add_node(3);
    CHECK(g.door_connected()); // single node

    g.add_node(4);
    CHECK(!g.door_connected());
    g.add_edge(0, 1, Connectivity::Adjacent);
    CHECK(!g.door_connected()); // adjacency does not count

    AccessGraph h;
    h.add_node(3);
    h.add_node(4);
    h.add_node(5);
    h.add_edge(0, 1, Connectivity::Door);
    h.add_edge(1, 2, Connectivity::Door);
    CHECK(h.door_connected());
}

TEST_CASE("graph json uses the exact wire field names") {
    AccessGraph g;
    g.add_node(3, 20);
    g.add_node(4, 30);
    g.add_edge(0, 1, Connectivity::Adjacent);

    nlohmann::json doc = g.to_json();
    REQUIRE(doc.contains("nodes"));
    REQUIRE(doc.contains("edges"));
    const auto& node = doc["nodes"][0];
    CHECK(node.size() == 3);
    CHECK(node.contains("id"));
    CHECK(node.contains("room_type"));
    CHECK(node.contains("pixel_area"));
    const auto& edge = doc["edges"][0];
    CHECK(edge.size() == 3);
    CHECK(edge["a"] == 0);
    CHECK(edge["b"] == 1);
    CHECK(edge["connectivity"] == "adjacent");

    AccessGraph back = AccessGraph::from_json(doc);
    CHECK(back.order() == 2);
    CHECK(back.node(0).pixel_area == 20);
    CHECK(back.edge_between(0, 1) == Connectivity::Adjacent);

    nlohmann::json bad = doc;
    bad["edges"][0]["connectivity"] = "portal";
    CHECK_THROWS_AS(AccessGraph::from_json(bad), Error);
}

TEST_CASE("pair keys are canonical") {
    PairKey k1 = make_pair_key("b", "a");
    PairKey k2 = make_pair_key("a", "b");
    CHECK(k1 == k2);
    CHECK(k1.a == "a");
    CHECK(k1.b == "b");
}

namespace {

FloorPlan minimal_valid_plan() {
    // two rooms split by a wall carrying a door
    SemanticImage image(9, 5, kBackground);
    for (int y = 1; y <= 3; ++y) {
        for (int x = 1; x <= 3; ++x) image.set(x, y, 3);
        image.set(4, y, kWall);
        for (int x = 5; x <= 7; ++x) image.set(x, y, 4);
    }
    image.set(4, 2, kDoor);

    AccessGraph graph;
    graph.add_node(3, 9);
    graph.add_node(4, 9);
    graph.add_edge(0, 1, Connectivity::Door);
    return FloorPlan{"minimal", std::move(image), std::move(graph)};
}

} // namespace

TEST_CASE("validate_floor_plan: minimal valid plan passes") {
    FloorPlan plan = minimal_valid_plan();
    CHECK(validate_floor_plan(plan, fixture_categories()).empty());
}

TEST_CASE("validate_floor_plan: adjacency-only room is flagged") {
    FloorPlan plan = minimal_valid_plan();
    AccessGraph graph;
    graph.add_node(3, 9);
    graph.add_node(4, 9);
    graph.add_edge(0, 1, Connectivity::Adjacent);
    plan.graph = std::move(graph);

    std::vector<std::string> report = validate_floor_plan(plan, fixture_categories());
    REQUIRE(report.size() == 1);
    CHECK(report[0].find("door subgraph not connected") != std::string::npos);
    CHECK(report[0].find("1") != std::string::npos); // unreachable node listed
}

TEST_CASE("validate_floor_plan: zero area pixels is flagged") {
    FloorPlan plan = minimal_valid_plan();
    plan.image = SemanticImage(4, 4, kBackground);
    std::vector<std::string> report = validate_floor_plan(plan, fixture_categories());
    bool no_rooms = false;
    for (const std::string& r : report) {
        if (r.find("no area-role pixels") != std::string::npos) no_rooms = true;
    }
    CHECK(no_rooms);
}

TEST_CASE("validate_floor_plan: unknown labels and missing room types") {
    FloorPlan plan = minimal_valid_plan();
    plan.image.set(0, 0, 200); // label absent from the map
    std::vector<std::string> report = validate_floor_plan(plan, fixture_categories());
    REQUIRE(report.size() == 1);
    CHECK(report[0] == "image: label 200 not present in category map");

    plan = minimal_valid_plan();
    AccessGraph graph;
    graph.add_node(3, 9);
    graph.add_node(8, 9); // balcony: valid code, no such pixels
    graph.add_edge(0, 1, Connectivity::Door);
    plan.graph = std::move(graph);
    report = validate_floor_plan(plan, fixture_categories());
    REQUIRE(report.size() == 1);
    CHECK(report[0].find("does not appear as an area label") != std::string::npos);
}

TEST_CASE("validate_floor_plan is pure") {
    FloorPlan plan = minimal_valid_plan();
    plan.graph = AccessGraph({{0, 3, 9}, {1, 4, 9}, {2, 5, 4}},
                             {{0, 1, Connectivity::Adjacent}, {1, 2, Connectivity::Adjacent}});
    CategoryMap map = fixture_categories();
    std::vector<std::string> first = validate_floor_plan(plan, map);
    std::vector<std::string> second = validate_floor_plan(plan, map);
    CHECK(first == second);
    CHECK(!first.empty());
}
