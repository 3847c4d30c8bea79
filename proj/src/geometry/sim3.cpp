#include "panoblock/geometry/sim3.hpp"

#include <cmath>

#include <json.hpp>

#include "panoblock/error.hpp"

namespace panoblock {

Sim3::Sim3(double scale, const Eigen::Quaterniond& rotation, const Eigen::Vector3d& translation)
    : s(scale), q(rotation.normalized()), t(translation) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw ArgumentError("Sim3 scale must be positive and finite");
    }
}

Sim3 Sim3::inverse() const {
    Sim3 inv;
    inv.s = 1.0 / s;
    inv.q = q.conjugate();
    inv.t = -(inv.s * (inv.q * t));
    return inv;
}

Eigen::Matrix4d Sim3::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = s * q.toRotationMatrix();
    m.topRightCorner<3, 1>() = t;
    return m;
}

Sim3 Sim3::from_rotation_matrix(double scale, const Eigen::Matrix3d& rotation,
                                const Eigen::Vector3d& translation) {
    return Sim3(scale, Eigen::Quaterniond(rotation), translation);
}

Sim3 operator*(const Sim3& a, const Sim3& b) {
    Sim3 c;
    c.s = a.s * b.s;
    c.q = (a.q * b.q).normalized();
    c.t = a.s * (a.q * b.t) + a.t;
    return c;
}

double rotation_angle(const Eigen::Quaterniond& q) {
    const double w = std::min(1.0, std::abs(q.normalized().w()));
    return 2.0 * std::acos(w);
}

Sim3Deviation deviation_from_identity(const Sim3& g) {
    return Sim3Deviation{std::abs(g.s - 1.0), rotation_angle(g.q), g.t.norm()};
}

void to_json(nlohmann::json& j, const Sim3& g) {
    j = nlohmann::json{{"s", g.s},
                       {"q", {g.q.w(), g.q.x(), g.q.y(), g.q.z()}},
                       {"t", {g.t.x(), g.t.y(), g.t.z()}}};
}

void from_json(const nlohmann::json& j, Sim3& g) {
    const auto& q = j.at("q");
    const auto& t = j.at("t");
    if (q.size() != 4 || t.size() != 3) throw DataError("sim3 json: q must be [w,x,y,z], t must be [x,y,z]");
    g = Sim3(j.at("s").get<double>(),
             Eigen::Quaterniond(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                                q[3].get<double>()),
             Eigen::Vector3d(t[0].get<double>(), t[1].get<double>(), t[2].get<double>()));
}

}  // namespace panoblock
