#include "panoblock/align/coarse.hpp"

#include <Eigen/Dense>

#include "panoblock/error.hpp"

namespace panoblock {

double mean_step_length(const Trajectory& traj) {
    if (traj.poses.size() < 2)
        throw ArgumentError("step length needs at least 2 poses");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < traj.poses.size(); ++i)
        sum += (traj.poses[i + 1].center() - traj.poses[i].center()).norm();
    return sum / double(traj.poses.size() - 1);
}

double coarse_scale(const Trajectory& traj1, const Trajectory& traj2) {
    const double d1 = mean_step_length(traj1);
    const double d2 = mean_step_length(traj2);
    if (d2 < 1e-12) throw DataError("stationary trajectory: scale ratio undefined");
    return d1 / d2;
}

Eigen::Matrix3d chordal_mean_rotation(const std::vector<Eigen::Matrix3d>& rotations) {
    if (rotations.empty()) throw ArgumentError("no rotations to average");
    Eigen::Matrix3d mean = Eigen::Matrix3d::Zero();
    for (const auto& r : rotations) mean += r;
    mean /= double(rotations.size());

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(mean, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()(2) < 1e-9)
        throw NumericalError("degenerate rotation mean: dispersion too large");
    Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0) {
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(2, 2) = -1;
        r = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    return r;
}

Sim3 coarse_rt(const Trajectory& traj1, const Trajectory& traj2, const OverlapSpec& overlap,
               double scale) {
    const Trajectory o1 = slice_by_frames(traj1, overlap.block1.first, overlap.block1.last);
    const Trajectory o2 = slice_by_frames(traj2, overlap.block2.first, overlap.block2.last);

    auto mean_center = [](const Trajectory& t) {
        Eigen::Vector3d c = Eigen::Vector3d::Zero();
        for (const auto& p : t.poses) c += p.center();
        return Eigen::Vector3d(c / double(t.poses.size()));
    };
    auto rotations_c2w = [](const Trajectory& t) {
        std::vector<Eigen::Matrix3d> rs;
        rs.reserve(t.poses.size());
        for (const auto& p : t.poses) rs.push_back(p.rotation_c2w());
        return rs;
    };

    const Eigen::Matrix3d r1 = chordal_mean_rotation(rotations_c2w(o1));
    const Eigen::Matrix3d r2 = chordal_mean_rotation(rotations_c2w(o2));
    const Eigen::Matrix3d dr = r1 * r2.transpose();
    const Eigen::Vector3d c1 = mean_center(o1);
    const Eigen::Vector3d c2 = mean_center(o2);

    Sim3 g;
    g.s = scale;
    g.q = Eigen::Quaterniond(dr).normalized();
    g.t = c1 - scale * (dr * c2);
    return g;
}

}  // namespace panoblock
