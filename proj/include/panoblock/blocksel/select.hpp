#pragma once

#include <Eigen/Core>
#include <vector>

#include "panoblock/blocksel/spline.hpp"

namespace panoblock {

struct BlockSelection {
    int block_id = -1;
    double distance = 0.0;
    double u = 0.0;
    std::vector<double> distances;  // per path, in input order
};

// Argmin-distance block for a viewer position. Ties within 1e-9 go to the
// lower block id. With hysteresis > 0 and a valid current_block, the current
// block is kept while its distance stays within hysteresis of the best.
BlockSelection select_block(const Eigen::Vector3d& p, const std::vector<SplinePath>& paths,
                            const std::vector<int>& block_ids, double hysteresis = 0.0,
                            int current_block = -1);

BlockSelection select_block(const Eigen::Vector3d& p, const std::vector<SplinePath>& paths);

}  // namespace panoblock
