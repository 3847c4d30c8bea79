#pragma once

#include <Eigen/Core>
#include <vector>

#include "panoblock/geometry/sim3.hpp"
#include "panoblock/scene/point_cloud.hpp"

namespace panoblock {

struct IcpParams {
    double keep_fraction = 0.90;   // fraction of correspondences kept after trimming
    int max_iterations = 50;
    double rel_tolerance = 1e-6;   // relative RMSE change convergence test
};

struct AlignmentReport {
    Sim3 coarse;
    Sim3 fine;
    int icp_iterations = 0;
    double coarse_rmse = 0.0;
    double fine_rmse = 0.0;
    std::size_t correspondences = 0;
    std::vector<double> rmse_history;
};

// Closed-form similarity transform minimizing |dst - (s R src + t)|^2.
Sim3 umeyama_similarity(const std::vector<Eigen::Vector3d>& src,
                        const std::vector<Eigen::Vector3d>& dst, bool with_scale = true);

// Trimmed ICP with a per-iteration similarity (not just rigid) update,
// starting from the coarse initial transform.
AlignmentReport icp_refine(const PointCloud& source, const PointCloud& target, const Sim3& init,
                           const IcpParams& params = {});

}  // namespace panoblock
