#pragma once

#include <vector>

#include "panoblock/scene/pose.hpp"

namespace panoblock {

struct AlignmentError {
    std::vector<double> per_frame;  // |C_est - C_gt| per shared frame
    double rmse = 0.0;
    double avg_step = 0.0;          // mean successive-center distance of gt
    double avg_ratio = 0.0;         // rmse / avg_step
};

// Requires identical frame id sequences in both trajectories.
AlignmentError alignment_error(const Trajectory& est, const Trajectory& gt);

}  // namespace panoblock
