#pragma once

#include <cstdint>
#include <vector>

#include "panoblock/image/image.hpp"

namespace panoblock {

// 1 = masked (to be removed / filled), 0 = keep.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    static BinaryMask create(int width, int height, std::uint8_t fill = 0);

    std::uint8_t& at(int x, int y) { return data[std::size_t(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[std::size_t(y) * width + x]; }

    std::size_t count() const;
};

// Morphological dilation with a Euclidean disk: dx^2 + dy^2 <= radius^2.
BinaryMask dilate(const BinaryMask& mask, int radius);

// Filled rotated ellipse. center and axes in pixels, angle in radians
// (rotation of the a-axis from +x).
BinaryMask ellipse_mask(int width, int height, double cx, double cy, double a, double b,
                        double angle);

BinaryMask mask_union(const BinaryMask& m1, const BinaryMask& m2);

// Replaces masked pixels by iterative diffusion from the unmasked boundary
// (4-neighbor averaging until max change < 1e-3 intensity or 500 sweeps).
Image8 fill_masked(const Image8& image, const BinaryMask& mask);

// PNG-facing conversions: nonzero (>= 128) pixels are masked; written masks
// use 0/255.
BinaryMask mask_from_image(const Image8& image);
Image8 mask_to_image(const BinaryMask& mask);

}  // namespace panoblock
