#include "panoblock/scene/point_cloud.hpp"

namespace panoblock {

PointCloud transformed(const PointCloud& cloud, const Sim3& g) {
    PointCloud out;
    out.colors = cloud.colors;
    out.points.reserve(cloud.points.size());
    for (const Eigen::Vector3d& p : cloud.points) out.points.push_back(g.apply(p));
    return out;
}

double bounding_diameter(const PointCloud& cloud) {
    if (cloud.points.size() < 2) return 0.0;
    Eigen::Vector3d lo = cloud.points.front();
    Eigen::Vector3d hi = lo;
    for (const Eigen::Vector3d& p : cloud.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

}  // namespace panoblock
