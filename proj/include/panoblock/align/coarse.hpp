#pragma once

#include <Eigen/Core>
#include <vector>

#include "panoblock/geometry/sim3.hpp"
#include "panoblock/scene/manifest.hpp"
#include "panoblock/scene/pose.hpp"

namespace panoblock {

enum class OverlapSource { manifest, similarity };

// Frames shared by two blocks: range in block 1 and the matching range in
// block 2. For same-flight neighbors these are the same global frames; for
// cross-flight pairs they come from image similarity.
struct OverlapSpec {
    FrameRange block1;
    FrameRange block2;
    OverlapSource source = OverlapSource::manifest;
};

// Mean distance between successive camera centers.
double mean_step_length(const Trajectory& traj);

// Scale ratio of block 1 over block 2 from mean step lengths.
double coarse_scale(const Trajectory& traj1, const Trajectory& traj2);

// Projection of the arithmetic mean of rotation matrices onto SO(3).
Eigen::Matrix3d chordal_mean_rotation(const std::vector<Eigen::Matrix3d>& rotations);

// Rotation/translation that map block 2's overlap mean pose onto block 1's,
// combined with the given scale into one similarity transform.
Sim3 coarse_rt(const Trajectory& traj1, const Trajectory& traj2, const OverlapSpec& overlap,
               double scale);

}  // namespace panoblock
