#ifndef FPSIM_IOU_HPP
#define FPSIM_IOU_HPP

#include <optional>
#include <vector>

#include "fpsim/core.hpp"

namespace fpsim {

struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values; // 0 or 1, row-major

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0) {}
};

/// Mask of pixels equal to `code`.
BinaryMask class_mask(const SemanticImage& image, CategoryCode code);

/// |a ∩ b| / |a ∪ b|. Empty union (both masks empty) is undefined and
/// reported as nullopt rather than a number.
std::optional<double> iou_binary(const BinaryMask& a, const BinaryMask& b);

/// Mean of per-class IoU between two same-shaped semantic images.
///
/// Background is always excluded. By default the class universe is the set
/// of non-background classes present in at least one of the two images, so
/// 0/0 classes never dilute the mean. With strict_class_universe the divisor
/// is the number of non-background classes in the CategoryMap and absent
/// classes contribute 0.
double miou(const SemanticImage& x1, const SemanticImage& x2, const CategoryMap& categories,
            bool strict_class_universe = false);

} // namespace fpsim

#endif
