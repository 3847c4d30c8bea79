#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <json.hpp>

namespace panoblock {

// Similarity transform x -> s * R(q) * x + t with s > 0 and unit q.
struct Sim3 {
    double s = 1.0;
    Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
    Eigen::Vector3d t = Eigen::Vector3d::Zero();

    Sim3() = default;
    Sim3(double scale, const Eigen::Quaterniond& rotation, const Eigen::Vector3d& translation);

    Eigen::Vector3d apply(const Eigen::Vector3d& x) const { return s * (q * x) + t; }

    Sim3 inverse() const;
    Eigen::Matrix4d matrix() const;

    static Sim3 identity() { return Sim3(); }
    static Sim3 from_rotation_matrix(double scale, const Eigen::Matrix3d& rotation,
                                     const Eigen::Vector3d& translation);
};

// Composition: (a * b)(x) == a(b(x)).
Sim3 operator*(const Sim3& a, const Sim3& b);

// Geodesic rotation angle in radians, in [0, pi].
double rotation_angle(const Eigen::Quaterniond& q);

// How far g is from the identity, split per component. Used to compare an
// estimated transform against ground truth via g_est * g_true.
struct Sim3Deviation {
    double scale_rel;        // |s - 1|
    double rotation_rad;     // geodesic angle of q
    double translation_norm; // ||t||
};
Sim3Deviation deviation_from_identity(const Sim3& g);

void to_json(nlohmann::json& j, const Sim3& g);
void from_json(const nlohmann::json& j, Sim3& g);

}  // namespace panoblock
