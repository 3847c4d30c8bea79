#pragma once

#include <cstdint>
#include <vector>

namespace panoblock {

// Row-major interleaved 8-bit image, 1 (gray) or 3 (rgb) channels.
struct Image8 {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;

    static Image8 create(int width, int height, int channels, std::uint8_t fill = 0);

    bool empty() const { return data.empty(); }
    std::size_t pixel_count() const { return std::size_t(width) * std::size_t(height); }

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(std::size_t(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(std::size_t(y) * width + x) * channels + c];
    }

    bool same_shape(const Image8& other) const {
        return width == other.width && height == other.height && channels == other.channels;
    }
};

// Single-channel float image used by the feature and metric internals.
struct ImageF {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    static ImageF create(int width, int height, float fill = 0.f);

    float& at(int x, int y) { return data[std::size_t(y) * width + x]; }
    float at(int x, int y) const { return data[std::size_t(y) * width + x]; }
};

// Rec.601 luma, scaled to [0, 1].
ImageF to_gray(const Image8& image);

// Bilinear sample with clamped coordinates; x/y in pixel-center coordinates.
float sample_bilinear(const ImageF& image, float x, float y);

}  // namespace panoblock
