#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "panoblock/geometry/sim3.hpp"

namespace panoblock {

// Per-frame rigid pose in SfM convention: q/t map world points into the
// camera frame, x_cam = R(q) * x_world + t.
struct CameraPose {
    long frame_id = 0;
    Eigen::Quaterniond q = Eigen::Quaterniond::Identity();  // world-to-camera
    Eigen::Vector3d t = Eigen::Vector3d::Zero();

    // C = -R^T t
    Eigen::Vector3d center() const { return -(q.conjugate() * t); }
    Eigen::Matrix3d rotation_c2w() const { return q.conjugate().toRotationMatrix(); }

    static CameraPose from_c2w(long frame_id, const Eigen::Matrix3d& r_c2w,
                               const Eigen::Vector3d& center);
};

Eigen::Vector3d camera_center(const CameraPose& pose);

struct Trajectory {
    std::vector<CameraPose> poses;
    int block_id = -1;
};

// Throws DataError unless frame ids are strictly increasing and all
// quaternions are normalizable.
void validate(const Trajectory& traj);

std::vector<Eigen::Vector3d> camera_centers(const Trajectory& traj);

// Applies g to the trajectory: centers map through g, camera-to-world
// rotations are premultiplied by R(g.q).
Trajectory transformed(const Trajectory& traj, const Sim3& g);

// Poses with first <= frame_id <= last (inclusive). Throws DataError when the
// result is empty.
Trajectory slice_by_frames(const Trajectory& traj, long first, long last);

}  // namespace panoblock
