#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "panoblock/geometry/sim3.hpp"

namespace panoblock {

struct PointCloud {
    std::vector<Eigen::Vector3d> points;
    std::vector<std::array<std::uint8_t, 3>> colors;  // empty, or one entry per point

    bool has_colors() const { return !colors.empty(); }
    std::size_t size() const { return points.size(); }
};

PointCloud transformed(const PointCloud& cloud, const Sim3& g);

// Diagonal of the axis-aligned bounding box; 0 for clouds of < 2 points.
double bounding_diameter(const PointCloud& cloud);

}  // namespace panoblock
