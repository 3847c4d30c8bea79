#pragma once

#include <string>

#include "panoblock/image/image.hpp"

namespace panoblock {

// Reads a PNG into an 8-bit gray or rgb image. Palette images are expanded,
// 16-bit channels are reduced to 8, alpha is stripped.
Image8 read_png(const std::string& path);

void write_png(const std::string& path, const Image8& image);

}  // namespace panoblock
