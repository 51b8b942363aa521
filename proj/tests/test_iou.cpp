#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fpsim/iou.hpp"
#include "testutil.hpp"

using namespace fpsim;
using namespace fpsim::testutil;

namespace {

// background 0, two area classes 1 and 2, plus an opening the map requires
CategoryMap two_class_map() {
    return CategoryMap({{0, "bg", Role::Background},
                        {1, "room_a", Role::Area},
                        {2, "room_b", Role::Area},
                        {9, "door", Role::Opening}});
}

SemanticImage image2x2(CategoryCode a, CategoryCode b, CategoryCode c, CategoryCode d) {
    SemanticImage img(2, 2, 0);
    img.set(0, 0, a);
    img.set(1, 0, b);
    img.set(0, 1, c);
    img.set(1, 1, d);
    return img;
}

} // namespace

TEST_CASE("iou_binary basics") {
    BinaryMask a(2, 2);
    a.values = {1, 1, 1, 1};
    BinaryMask b = a;
    CHECK(iou_binary(a, b) == 1.0);

    b.values = {0, 0, 0, 0};
    CHECK(!iou_binary(b, b).has_value()); // 0/0 undefined

    BinaryMask left(2, 2);
    left.values = {1, 0, 1, 0};
    CHECK(iou_binary(a, left) == 0.5); // intersection 2, union 4

    BinaryMask right(2, 2);
    right.values = {0, 1, 0, 1};
    CHECK(iou_binary(left, right) == 0.0); // disjoint

    BinaryMask other(3, 2);
    CHECK_THROWS_AS(iou_binary(a, other), DimensionMismatch);
}

TEST_CASE("miou: identical and disjoint images") {
    CategoryMap map = two_class_map();
    SemanticImage x1 = image2x2(1, 1, 2, 2);
    CHECK(miou(x1, x1, map) == 1.0);

    SemanticImage all1(2, 2, 1);
    SemanticImage all2(2, 2, 2);
    CHECK(miou(all1, all2, map) == 0.0);
}

TEST_CASE("miou: hand-counted 2x2 example is 7/12") {
    CategoryMap map = two_class_map();
    SemanticImage x1 = image2x2(1, 1, 2, 2);
    SemanticImage x2 = image2x2(1, 2, 2, 2);
    // class 1: inter 1, union 2 -> 1/2; class 2: inter 2, union 3 -> 2/3
    double value = miou(x1, x2, map);
    CHECK(value == doctest::Approx(7.0 / 12.0).epsilon(1e-15));
    CHECK(std::abs(value - 7.0 / 12.0) < 1e-15);
    CHECK(miou(x2, x1, map) == value);
}

TEST_CASE("miou: background never enters the average") {
    CategoryMap map = two_class_map();
    // identical class-1 region, wildly different background extents
    SemanticImage x1 = image2x2(1, 0, 0, 0);
    SemanticImage x2 = image2x2(1, 0, 0, 0);
    CHECK(miou(x1, x2, map) == 1.0);

    // swapping background for background changes nothing
    SemanticImage x3 = image2x2(1, 0, 0, 0);
    SemanticImage x4 = image2x2(1, 2, 2, 2);
    // class1: 1/1, class2: 0/3 -> (1 + 0)/2
    CHECK(miou(x3, x4, map) == 0.5);
}

TEST_CASE("miou: absent classes do not dilute, strict mode divides by all") {
    CategoryMap map = two_class_map();
    SemanticImage x1 = image2x2(1, 1, 1, 2);
    SemanticImage x2 = image2x2(1, 1, 2, 2);
    // class1: inter 2 / union 3; class2: inter 1 / union 2
    double default_mode = miou(x1, x2, map);
    CHECK(default_mode == doctest::Approx((2.0 / 3.0 + 0.5) / 2.0).epsilon(1e-15));
    // the strict universe is every non-background class in the map: the two
    // rooms present, an absent third room, and the (absent) door class
    CategoryMap wider({{0, "bg", Role::Background},
                       {1, "room_a", Role::Area},
                       {2, "room_b", Role::Area},
                       {3, "room_c", Role::Area},
                       {9, "door", Role::Opening}});
    CHECK(miou(x1, x2, wider) == default_mode);
    CHECK(miou(x1, x2, wider, true) ==
          doctest::Approx((2.0 / 3.0 + 0.5) / 4.0).epsilon(1e-15));
}

TEST_CASE("miou: errors") {
    CategoryMap map = two_class_map();
    SemanticImage x1 = image2x2(1, 1, 2, 2);
    SemanticImage wide(3, 2, 1);
    CHECK_THROWS_AS(miou(x1, wide, map), DimensionMismatch);

    SemanticImage bg(2, 2, 0);
    CHECK_THROWS_AS(miou(bg, bg, map), NoSharedClasses);

    SemanticImage alien = image2x2(1, 1, 7, 2); // 7 not in map
    CHECK_THROWS_AS(miou(alien, x1, map), UnknownLabel);
}

TEST_CASE("miou: symmetry, range and self-similarity on random images") {
    CategoryMap map = fixture_categories();
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> label(0, 8);
    for (int round = 0; round < 100; ++round) {
        SemanticImage a(8, 8, 0);
        SemanticImage b(8, 8, 0);
        for (std::size_t i = 0; i < a.labels.size(); ++i) {
            a.labels[i] = static_cast<CategoryCode>(label(rng));
            b.labels[i] = static_cast<CategoryCode>(label(rng));
        }
        double ab = miou(a, b, map);
        CHECK(ab == miou(b, a, map)); // exact symmetry: same accumulation order
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(miou(a, a, map) == 1.0);
    }
}

TEST_CASE("miou: translation strictly hurts (documented sensitivity)") {
    CategoryMap map = two_class_map();
    SemanticImage a(8, 8, 0);
    for (int y = 2; y < 6; ++y) {
        for (int x = 2; x < 6; ++x) a.set(x, y, 1);
    }
    SemanticImage shifted(8, 8, 0);
    for (int y = 2; y < 6; ++y) {
        for (int x = 3; x < 7; ++x) shifted.set(x, y, 1);
    }
    CHECK(miou(a, shifted, map) < 1.0);
    CHECK(miou(a, shifted, map) == doctest::Approx(12.0 / 20.0).epsilon(1e-15));
}

TEST_CASE("miou agrees with per-class iou_binary composition") {
    CategoryMap map = fixture_categories();
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<int> label(0, 8);
    for (int round = 0; round < 20; ++round) {
        SemanticImage a(10, 6, 0);
        SemanticImage b(10, 6, 0);
        for (std::size_t i = 0; i < a.labels.size(); ++i) {
            a.labels[i] = static_cast<CategoryCode>(label(rng));
            b.labels[i] = static_cast<CategoryCode>(label(rng));
        }
        double sum = 0.0;
        int classes = 0;
        for (const CategoryEntry& e : map.entries()) {
            if (e.role == Role::Background) continue;
            auto value = iou_binary(class_mask(a, e.code), class_mask(b, e.code));
            if (!value) continue;
            sum += *value;
            ++classes;
        }
        REQUIRE(classes > 0);
        CHECK(miou(a, b, map) == doctest::Approx(sum / classes).epsilon(1e-12));
    }
}
