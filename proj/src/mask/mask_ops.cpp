#include "panoblock/mask/mask_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "panoblock/error.hpp"

namespace panoblock {

BinaryMask BinaryMask::create(int width, int height, std::uint8_t fill) {
    if (width <= 0 || height <= 0) throw ArgumentError("mask dimensions must be positive");
    BinaryMask m;
    m.width = width;
    m.height = height;
    m.data.assign(std::size_t(width) * height, fill ? 1 : 0);
    return m;
}

std::size_t BinaryMask::count() const {
    return std::size_t(std::count(data.begin(), data.end(), std::uint8_t(1)));
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
    if (radius < 0) throw ArgumentError("dilation radius must be non-negative");
    if (radius == 0) return mask;

    std::vector<std::pair<int, int>> offsets;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dx, dy);

    BinaryMask out = BinaryMask::create(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            for (const auto& [dx, dy] : offsets) {
                const int nx = x + dx;
                const int ny = y + dy;
                if (nx >= 0 && nx < mask.width && ny >= 0 && ny < mask.height) out.at(nx, ny) = 1;
            }
        }
    }
    return out;
}

BinaryMask ellipse_mask(int width, int height, double cx, double cy, double a, double b,
                        double angle) {
    if (a <= 0 || b <= 0) throw ArgumentError("ellipse semi-axes must be positive");
    BinaryMask out = BinaryMask::create(width, height);
    const double ca = std::cos(angle);
    const double sa = std::sin(angle);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            const double xr = dx * ca + dy * sa;
            const double yr = -dx * sa + dy * ca;
            if ((xr / a) * (xr / a) + (yr / b) * (yr / b) <= 1.0) out.at(x, y) = 1;
        }
    }
    return out;
}

BinaryMask mask_union(const BinaryMask& m1, const BinaryMask& m2) {
    if (m1.width != m2.width || m1.height != m2.height)
        throw ArgumentError("mask dimensions differ");
    BinaryMask out = m1;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = out.data[i] || m2.data[i];
    return out;
}

Image8 fill_masked(const Image8& image, const BinaryMask& mask) {
    if (image.width != mask.width || image.height != mask.height)
        throw ArgumentError("image and mask dimensions differ");
    const std::size_t total = mask.data.size();
    const std::size_t masked = mask.count();
    if (masked == 0) return image;
    if (masked == total) throw DataError("fully masked image: no boundary data to fill from");

    const int w = image.width;
    const int h = image.height;
    const int ch = image.channels;

    // start masked pixels from the mean of the visible ones
    std::vector<double> buf(image.data.begin(), image.data.end());
    std::vector<double> mean(ch, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (!mask.at(x, y))
                for (int c = 0; c < ch; ++c) mean[c] += image.at(x, y, c);
    for (int c = 0; c < ch; ++c) mean[c] /= double(total - masked);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mask.at(x, y))
                for (int c = 0; c < ch; ++c) buf[(std::size_t(y) * w + x) * ch + c] = mean[c];

    auto value = [&](int x, int y, int c) { return buf[(std::size_t(y) * w + x) * ch + c]; };

    for (int sweep = 0; sweep < 500; ++sweep) {
        double max_change = 0.0;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (!mask.at(x, y)) continue;
                for (int c = 0; c < ch; ++c) {
                    double sum = 0.0;
                    int n = 0;
                    if (x > 0) { sum += value(x - 1, y, c); ++n; }
                    if (x + 1 < w) { sum += value(x + 1, y, c); ++n; }
                    if (y > 0) { sum += value(x, y - 1, c); ++n; }
                    if (y + 1 < h) { sum += value(x, y + 1, c); ++n; }
                    const double next = sum / n;
                    max_change = std::max(max_change,
                                          std::abs(next - value(x, y, c)));
                    buf[(std::size_t(y) * w + x) * ch + c] = next;
                }
            }
        }
        if (max_change < 1e-3) break;
    }

    Image8 out = image;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mask.at(x, y))
                for (int c = 0; c < ch; ++c)
                    out.at(x, y, c) = std::uint8_t(
                        std::lround(std::clamp(value(x, y, c), 0.0, 255.0)));
    return out;
}

BinaryMask mask_from_image(const Image8& image) {
    BinaryMask out = BinaryMask::create(image.width, image.height);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) {
            int v = 0;
            for (int c = 0; c < image.channels; ++c) v = std::max(v, int(image.at(x, y, c)));
            out.at(x, y) = v >= 128 ? 1 : 0;
        }
    return out;
}

Image8 mask_to_image(const BinaryMask& mask) {
    Image8 out = Image8::create(mask.width, mask.height, 1);
    for (std::size_t i = 0; i < mask.data.size(); ++i) out.data[i] = mask.data[i] ? 255 : 0;
    return out;
}

}  // namespace panoblock
