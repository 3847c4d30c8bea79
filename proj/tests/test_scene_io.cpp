#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "panoblock/error.hpp"
#include "panoblock/geometry/sim3.hpp"
#include "panoblock/io/colmap.hpp"
#include "panoblock/io/ply.hpp"
#include "panoblock/scene/manifest.hpp"
#include "panoblock/scene/point_cloud.hpp"
#include "panoblock/scene/pose.hpp"

using namespace panoblock;
namespace fs = std::filesystem;

namespace {

Sim3 random_sim3_local(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::Vector3d axis(u(rng), u(rng), u(rng));
    axis.normalize();
    const double angle = 0.5 * std::abs(u(rng)) + 0.1;
    Sim3 g;
    g.s = 0.5 + std::abs(u(rng));
    g.q = Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis));
    g.t = Eigen::Vector3d(u(rng), u(rng), u(rng));
    return g;
}

}  // namespace

TEST_CASE("sim3 composition matches sequential application") {
    const Sim3 a = random_sim3_local(1);
    const Sim3 b = random_sim3_local(2);
    const Eigen::Vector3d x(0.3, -1.2, 2.5);
    CHECK(((a * b).apply(x) - a.apply(b.apply(x))).norm() < 1e-12);
}

TEST_CASE("sim3 inverse undoes the transform") {
    const Sim3 g = random_sim3_local(3);
    const Eigen::Vector3d x(-2.0, 0.7, 1.1);
    CHECK((g.inverse().apply(g.apply(x)) - x).norm() < 1e-12);
    const Sim3Deviation dev = deviation_from_identity(g * g.inverse());
    CHECK(dev.scale_rel < 1e-12);
    CHECK(dev.rotation_rad < 1e-9);
    CHECK(dev.translation_norm < 1e-12);
}

TEST_CASE("sim3 matrix agrees with apply") {
    const Sim3 g = random_sim3_local(4);
    const Eigen::Vector3d x(1.0, 2.0, 3.0);
    const Eigen::Vector4d xh(1.0, 2.0, 3.0, 1.0);
    const Eigen::Vector4d yh = g.matrix() * xh;
    CHECK((yh.head<3>() - g.apply(x)).norm() < 1e-12);
    CHECK(yh[3] == 1.0);
}

TEST_CASE("sim3 json round trip") {
    const Sim3 g = random_sim3_local(5);
    nlohmann::json j;
    to_json(j, g);
    CHECK(j.contains("s"));
    CHECK(j.at("q").size() == 4);
    CHECK(j.at("t").size() == 3);
    Sim3 h;
    from_json(j, h);
    CHECK(h.s == g.s);
    CHECK((h.t - g.t).norm() == 0.0);
    CHECK(rotation_angle(h.q * g.q.conjugate()) < 1e-15);
}

TEST_CASE("rotation_angle known values") {
    CHECK(rotation_angle(Eigen::Quaterniond::Identity()) == 0.0);
    const Eigen::Quaterniond q(Eigen::AngleAxisd(0.5, Eigen::Vector3d::UnitZ()));
    CHECK(rotation_angle(q) == doctest::Approx(0.5).epsilon(1e-12));
    // antipodal quaternion represents the same rotation
    const Eigen::Quaterniond m(-q.w(), -q.x(), -q.y(), -q.z());
    CHECK(rotation_angle(m) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("camera center convention") {
    CameraPose pose;
    pose.q = Eigen::Quaterniond(Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitY()));
    pose.t = Eigen::Vector3d(1.0, -2.0, 0.5);
    const Eigen::Matrix3d r = pose.q.toRotationMatrix();
    const Eigen::Vector3d expected = -r.transpose() * pose.t;
    CHECK((pose.center() - expected).norm() < 1e-14);
}

TEST_CASE("from_c2w round trips rotation and center") {
    const Eigen::Matrix3d r_c2w =
        Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
    const Eigen::Vector3d c(4.0, 5.0, 6.0);
    const CameraPose pose = CameraPose::from_c2w(42, r_c2w, c);
    CHECK(pose.frame_id == 42);
    CHECK((pose.center() - c).norm() < 1e-12);
    CHECK((pose.rotation_c2w() - r_c2w).norm() < 1e-12);
}

TEST_CASE("transformed trajectory maps centers through g") {
    Trajectory traj;
    for (long i = 0; i < 5; ++i) {
        CameraPose p;
        p.frame_id = i;
        p.q = Eigen::Quaterniond(Eigen::AngleAxisd(0.1 * double(i), Eigen::Vector3d::UnitZ()));
        p.t = Eigen::Vector3d(double(i), 0.5, -0.2);
        traj.poses.push_back(p);
    }
    const Sim3 g = random_sim3_local(6);
    const Trajectory mapped = transformed(traj, g);
    for (std::size_t i = 0; i < traj.poses.size(); ++i) {
        CHECK((mapped.poses[i].center() - g.apply(traj.poses[i].center())).norm() < 1e-12);
        const Eigen::Matrix3d expected = g.q.toRotationMatrix() * traj.poses[i].rotation_c2w();
        CHECK((mapped.poses[i].rotation_c2w() - expected).norm() < 1e-12);
    }
}

TEST_CASE("slice_by_frames keeps the inclusive range") {
    Trajectory traj;
    for (long i = 10; i < 20; ++i) {
        CameraPose p;
        p.frame_id = i;
        traj.poses.push_back(p);
    }
    const Trajectory sub = slice_by_frames(traj, 12, 15);
    REQUIRE(sub.poses.size() == 4);
    CHECK(sub.poses.front().frame_id == 12);
    CHECK(sub.poses.back().frame_id == 15);
    CHECK_THROWS_AS(slice_by_frames(traj, 100, 200), DataError);
}

TEST_CASE("trajectory validation rejects unordered frames") {
    Trajectory traj;
    CameraPose a, b;
    a.frame_id = 5;
    b.frame_id = 5;
    traj.poses = {a, b};
    CHECK_THROWS_AS(validate(traj), DataError);
}

TEST_CASE("sfm text round trip preserves poses") {
    std::vector<CameraPose> poses;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (long i = 0; i < 6; ++i) {
        CameraPose p;
        p.frame_id = i * 3;
        Eigen::Vector3d axis(u(rng), u(rng), u(rng));
        axis.normalize();
        p.q = Eigen::Quaterniond(Eigen::AngleAxisd(0.2 + 0.1 * double(i), axis));
        p.t = Eigen::Vector3d(u(rng), u(rng), u(rng));
        poses.push_back(p);
    }
    std::stringstream ss;
    write_sfm_text(ss, poses);
    const std::vector<CameraPose> back = parse_sfm_text(ss);
    REQUIRE(back.size() == poses.size());
    for (std::size_t i = 0; i < poses.size(); ++i) {
        CHECK(back[i].frame_id == poses[i].frame_id);
        CHECK((back[i].center() - poses[i].center()).norm() < 1e-12);
        CHECK(rotation_angle(back[i].q * poses[i].q.conjugate()) < 1e-12);
    }
}

TEST_CASE("sfm parser sorts by frame index and skips comments") {
    const std::string text =
        "# header comment\n"
        "# another\n"
        "2 1 0 0 0 0.5 0 0 1 frame_000010.png\n"
        "\n"
        "1 1 0 0 0 0.25 0 0 1 frame_000003.png\n"
        "\n";
    std::istringstream in(text);
    const auto poses = parse_sfm_text(in);
    REQUIRE(poses.size() == 2);
    CHECK(poses[0].frame_id == 3);
    CHECK(poses[1].frame_id == 10);
    CHECK(poses[0].t.x() == 0.25);
}

TEST_CASE("frame_index_from_name uses the last digit run") {
    CHECK(frame_index_from_name("frame_000042.png") == 42);
    CHECK(frame_index_from_name("cam2_frame_17") == 17);
    CHECK(frame_index_from_name("000001") == 1);
    CHECK_THROWS_AS(frame_index_from_name("no_digits_here"), DataError);
}

TEST_CASE("ply binary round trip is exact for float data") {
    PointCloud cloud;
    std::mt19937 rng(11);
    std::uniform_real_distribution<float> u(-10.f, 10.f);
    for (int i = 0; i < 100; ++i) {
        cloud.points.emplace_back(double(u(rng)), double(u(rng)), double(u(rng)));
        cloud.colors.push_back({std::uint8_t(i), std::uint8_t(255 - i), std::uint8_t(i * 2)});
    }
    std::stringstream ss;
    write_ply(ss, cloud);
    const PointCloud back = parse_ply(ss);
    REQUIRE(back.size() == cloud.size());
    REQUIRE(back.has_colors());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        // float storage: compare after one float round trip
        for (int k = 0; k < 3; ++k)
            CHECK(float(back.points[i][k]) == float(cloud.points[i][k]));
        CHECK(back.colors[i] == cloud.colors[i]);
    }
}

TEST_CASE("ply ascii parsing") {
    const std::string text =
        "ply\n"
        "format ascii 1.0\n"
        "element vertex 2\n"
        "property float x\n"
        "property float y\n"
        "property float z\n"
        "end_header\n"
        "1 2 3\n"
        "-4 5.5 0\n";
    std::istringstream in(text);
    const PointCloud cloud = parse_ply(in);
    REQUIRE(cloud.size() == 2);
    CHECK(cloud.points[0] == Eigen::Vector3d(1, 2, 3));
    CHECK(cloud.points[1] == Eigen::Vector3d(-4, 5.5, 0));
    CHECK(!cloud.has_colors());
}

TEST_CASE("bounding_diameter is the bbox diagonal") {
    PointCloud cloud;
    cloud.points = {{0, 0, 0}, {1, 0, 0}, {1, 2, 0}, {0.5, 1.0, 2.0}};
    CHECK(bounding_diameter(cloud) == doctest::Approx(3.0).epsilon(1e-12));
    PointCloud single;
    single.points = {{3, 3, 3}};
    CHECK(bounding_diameter(single) == 0.0);
}

TEST_CASE("point cloud transform scales pairwise distances") {
    PointCloud cloud;
    cloud.points = {{0, 0, 0}, {1, 1, 1}, {2, 0, 1}};
    Sim3 g = random_sim3_local(8);
    const PointCloud mapped = transformed(cloud, g);
    const double d0 = (cloud.points[0] - cloud.points[2]).norm();
    const double d1 = (mapped.points[0] - mapped.points[2]).norm();
    CHECK(d1 == doctest::Approx(g.s * d0).epsilon(1e-12));
}

TEST_CASE("frame range intersect") {
    const FrameRange a{0, 99};
    const FrameRange b{75, 174};
    const auto shared = intersect(a, b);
    REQUIRE(shared.has_value());
    CHECK(shared->first == 75);
    CHECK(shared->last == 99);
    CHECK(!intersect(FrameRange{0, 10}, FrameRange{11, 20}).has_value());
}

TEST_CASE("manifest json round trip and plan save/load") {
    PartitionPlan plan;
    plan.overlap_fraction = 0.25;
    BlockManifest m;
    m.block_id = 0;
    m.flight_id = 0;
    m.frames = {0, 99};
    m.overlap_next = FrameRange{75, 99};
    plan.blocks.push_back(m);
    m.block_id = 1;
    m.frames = {75, 174};
    m.overlap_prev = FrameRange{75, 99};
    m.overlap_next.reset();
    plan.blocks.push_back(m);

    const fs::path file = fs::temp_directory_path() / "panoblock_test_plan.json";
    save_plan(file, plan);
    const PartitionPlan back = load_plan(file);
    REQUIRE(back.blocks.size() == 2);
    CHECK(back.overlap_fraction == plan.overlap_fraction);
    CHECK(back.blocks[0] == plan.blocks[0]);
    CHECK(back.blocks[1] == plan.blocks[1]);
    CHECK(back.flight_count() == 1);
    fs::remove(file);
}

TEST_CASE("manifest validation rejects overlap outside the range") {
    BlockManifest m;
    m.frames = {0, 99};
    m.overlap_next = FrameRange{90, 120};
    CHECK_THROWS_AS(validate(m), DataError);
    m.overlap_next.reset();
    m.frames = {10, 5};
    CHECK_THROWS_AS(validate(m), DataError);
}
