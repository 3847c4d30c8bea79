#include "panoblock/scene/pose.hpp"

#include <cmath>
#include <string>

#include "panoblock/error.hpp"

namespace panoblock {

CameraPose CameraPose::from_c2w(long frame_id, const Eigen::Matrix3d& r_c2w,
                                const Eigen::Vector3d& center) {
    CameraPose pose;
    pose.frame_id = frame_id;
    pose.q = Eigen::Quaterniond(r_c2w.transpose()).normalized();
    pose.t = -(pose.q * center);
    return pose;
}

Eigen::Vector3d camera_center(const CameraPose& pose) { return pose.center(); }

void validate(const Trajectory& traj) {
    for (std::size_t i = 0; i < traj.poses.size(); ++i) {
        const CameraPose& p = traj.poses[i];
        if (std::abs(p.q.norm() - 1.0) > 1e-9) {
            throw DataError("pose for frame " + std::to_string(p.frame_id) +
                            ": quaternion not normalized");
        }
        if (!p.center().allFinite()) {
            throw DataError("pose for frame " + std::to_string(p.frame_id) +
                            ": camera center not finite");
        }
        if (i > 0 && traj.poses[i - 1].frame_id >= p.frame_id) {
            throw DataError("trajectory frame ids not strictly increasing at frame " +
                            std::to_string(p.frame_id));
        }
    }
}

std::vector<Eigen::Vector3d> camera_centers(const Trajectory& traj) {
    std::vector<Eigen::Vector3d> centers;
    centers.reserve(traj.poses.size());
    for (const CameraPose& p : traj.poses) centers.push_back(p.center());
    return centers;
}

Trajectory transformed(const Trajectory& traj, const Sim3& g) {
    Trajectory out;
    out.block_id = traj.block_id;
    out.poses.reserve(traj.poses.size());
    for (const CameraPose& p : traj.poses) {
        const Eigen::Matrix3d r_c2w = g.q.toRotationMatrix() * p.rotation_c2w();
        out.poses.push_back(CameraPose::from_c2w(p.frame_id, r_c2w, g.apply(p.center())));
    }
    return out;
}

Trajectory slice_by_frames(const Trajectory& traj, long first, long last) {
    Trajectory out;
    out.block_id = traj.block_id;
    for (const CameraPose& p : traj.poses) {
        if (p.frame_id >= first && p.frame_id <= last) out.poses.push_back(p);
    }
    if (out.poses.empty()) {
        throw DataError("no poses in frame range [" + std::to_string(first) + ", " +
                        std::to_string(last) + "]");
    }
    return out;
}

}  // namespace panoblock
