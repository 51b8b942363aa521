#include "fpsim/iou.hpp"

#include <array>

namespace fpsim {

BinaryMask class_mask(const SemanticImage& image, CategoryCode code) {
    BinaryMask mask(image.width, image.height);
    for (std::size_t i = 0; i < image.labels.size(); ++i) {
        mask.values[i] = image.labels[i] == code ? 1 : 0;
    }
    return mask;
}

std::optional<double> iou_binary(const BinaryMask& a, const BinaryMask& b) {
    if (a.width != b.width || a.height != b.height) {
        throw DimensionMismatch("iou_binary: mask shapes differ");
    }
    std::int64_t inter = 0;
    std::int64_t uni = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        bool pa = a.values[i] != 0;
        bool pb = b.values[i] != 0;
        inter += pa && pb;
        uni += pa || pb;
    }
    if (uni == 0) return std::nullopt;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double miou(const SemanticImage& x1, const SemanticImage& x2, const CategoryMap& categories,
            bool strict_class_universe) {
    if (!x1.same_shape(x2)) throw DimensionMismatch("miou: image shapes differ");

    // Single pass: per-class intersection and union pixel counts.
    std::array<std::int64_t, 256> inter{};
    std::array<std::int64_t, 256> uni{};
    for (std::size_t i = 0; i < x1.labels.size(); ++i) {
        CategoryCode c1 = x1.labels[i];
        CategoryCode c2 = x2.labels[i];
        if (c1 == c2) {
            ++inter[c1];
            ++uni[c1];
        } else {
            ++uni[c1];
            ++uni[c2];
        }
    }

    std::array<bool, 256> known{};
    for (const CategoryEntry& e : categories.entries()) known[e.code] = true;
    for (int c = 0; c < 256; ++c) {
        if (uni[c] > 0 && !known[c]) {
            throw UnknownLabel("miou: label " + std::to_string(c) + " not in category map");
        }
    }

    double sum = 0.0;
    int present = 0;
    int universe = 0;
    for (const CategoryEntry& e : categories.entries()) {
        if (e.role == Role::Background) continue;
        ++universe;
        if (uni[e.code] == 0) continue; // absent from both images
        sum += static_cast<double>(inter[e.code]) / static_cast<double>(uni[e.code]);
        ++present;
    }
    if (present == 0) throw NoSharedClasses("miou: no non-background class present in either image");
    return sum / static_cast<double>(strict_class_universe ? universe : present);
}

} // namespace fpsim
