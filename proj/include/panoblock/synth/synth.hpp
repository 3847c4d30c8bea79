#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "panoblock/geometry/sim3.hpp"
#include "panoblock/image/image.hpp"
#include "panoblock/projection/cubemap.hpp"
#include "panoblock/scene/point_cloud.hpp"
#include "panoblock/scene/pose.hpp"

namespace panoblock {

enum class TrajectoryKind { line, loop, lawnmower, stacked_loops };

TrajectoryKind trajectory_kind_from_string(const std::string& name);

// Camera path with exactly constant step length between successive centers,
// cameras facing along the tangent with z up.
Trajectory gen_trajectory(TrajectoryKind kind, int frames, double step, std::uint64_t seed = 0);

// Points scattered uniformly in the trajectory's bounding box inflated by
// `margin` in every direction, with deterministic pseudo-random colors.
PointCloud gen_point_cloud(const Trajectory& traj, int count, double margin, std::uint64_t seed);

// Similarity transform with log-uniform scale in [scale_min, scale_max],
// uniform random axis, rotation angle <= max_angle_rad, translation norm <=
// max_translation.
Sim3 random_sim3(std::uint64_t seed, double scale_min, double scale_max, double max_angle_rad,
                 double max_translation);

struct PerturbedBlock {
    Trajectory trajectory;
    PointCloud cloud;
    Sim3 applied;  // ground truth; align should recover its inverse
};

PerturbedBlock perturb_block(const Trajectory& traj, const PointCloud& cloud, const Sim3& g,
                             double point_noise_sigma, std::uint64_t seed);

// --- procedural spherical textures ---------------------------------------

// Sum of integral-frequency sinusoids in phi and theta, attenuated away from
// the equator. Band-limited and seamless, so projection round trips are
// meaningful to 1 intensity level.
struct BandTexture {
    struct Term {
        int freq_phi = 0;
        double freq_theta = 0.0;
        double phase_phi = 0.0;
        double phase_theta = 0.0;
        double amplitude = 0.0;
    };
    std::vector<Term> terms;
    double envelope_sigma = 0.35;  // radians around the equator

    static BandTexture make(std::uint64_t seed, int term_count = 6, int max_freq = 40);

    // in [0, 1]
    double value(double theta, double phi) const;
};

enum class EquirectTexture { checker, gabor_band };

// W must equal 2H. checker: longitude/latitude squares with period pi/8.
// gabor_band: rasterized BandTexture::make(seed).
Image8 gen_equirect(EquirectTexture kind, int width, int height, std::uint64_t seed);

// --- synthetic indoor renders for feature matching -----------------------

// Axis-aligned box room with value-noise wall textures, ray-cast from
// inside. Gives repeatable feature-rich views for similarity tests.
struct RoomScene {
    Eigen::Vector3d min_corner{-4.0, -12.0, -2.0};
    Eigen::Vector3d max_corner{4.0, 12.0, 2.0};
    std::uint64_t seed = 0;
    double texture_scale = 1.4;  // noise cells per scene unit
    int octaves = 4;

    // gray value in [0, 1] at a wall point (by face of the box)
    double wall_value(int box_face, double u, double v) const;
};

// One gray cubemap face rendered by intersecting pixel rays with the room.
Image8 render_room_face(const RoomScene& room, const CameraPose& pose, const FaceFrame& frame,
                        int face_size);

// All 8 side faces for the pose.
std::vector<Image8> render_room_cubemap(const RoomScene& room, const CameraPose& pose,
                                        int face_size);

}  // namespace panoblock
