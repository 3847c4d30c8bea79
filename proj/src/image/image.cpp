#include "panoblock/image/image.hpp"

#include <algorithm>
#include <cmath>

#include "panoblock/error.hpp"

namespace panoblock {

Image8 Image8::create(int width, int height, int channels, std::uint8_t fill) {
    if (width <= 0 || height <= 0)
        throw ArgumentError("image dimensions must be positive");
    if (channels != 1 && channels != 3)
        throw ArgumentError("image must have 1 or 3 channels");
    Image8 img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.data.assign(std::size_t(width) * height * channels, fill);
    return img;
}

ImageF ImageF::create(int width, int height, float fill) {
    if (width <= 0 || height <= 0)
        throw ArgumentError("image dimensions must be positive");
    ImageF img;
    img.width = width;
    img.height = height;
    img.data.assign(std::size_t(width) * height, fill);
    return img;
}

ImageF to_gray(const Image8& image) {
    ImageF out = ImageF::create(image.width, image.height);
    const std::size_t n = image.pixel_count();
    if (image.channels == 1) {
        for (std::size_t i = 0; i < n; ++i) out.data[i] = image.data[i] / 255.f;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint8_t* p = &image.data[i * 3];
            out.data[i] = (0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2]) / 255.f;
        }
    }
    return out;
}

float sample_bilinear(const ImageF& image, float x, float y) {
    x = std::clamp(x, 0.f, float(image.width - 1));
    y = std::clamp(y, 0.f, float(image.height - 1));
    const int x0 = std::min(int(x), image.width - 2 >= 0 ? image.width - 2 : 0);
    const int y0 = std::min(int(y), image.height - 2 >= 0 ? image.height - 2 : 0);
    const int x1 = std::min(x0 + 1, image.width - 1);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const float fx = x - x0;
    const float fy = y - y0;
    const float top = image.at(x0, y0) * (1.f - fx) + image.at(x1, y0) * fx;
    const float bot = image.at(x0, y1) * (1.f - fx) + image.at(x1, y1) * fx;
    return top * (1.f - fy) + bot * fy;
}

}  // namespace panoblock
