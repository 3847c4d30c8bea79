#pragma once

#include <filesystem>
#include <iosfwd>

#include "panoblock/scene/point_cloud.hpp"

namespace panoblock {

// PLY point-cloud IO. Reads ascii and binary_little_endian files with float
// or double x/y/z and optional uchar red/green/blue; other properties and
// elements are skipped. Writing emits binary_little_endian float positions
// (plus uchar rgb when present), so float input round-trips byte-exactly.
PointCloud parse_ply(std::istream& in);
PointCloud load_ply(const std::filesystem::path& path);

void write_ply(std::ostream& out, const PointCloud& cloud, bool binary = true);
void save_ply(const std::filesystem::path& path, const PointCloud& cloud, bool binary = true);

}  // namespace panoblock
