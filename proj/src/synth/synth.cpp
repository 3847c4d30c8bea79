#include "panoblock/synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "panoblock/error.hpp"

namespace panoblock {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix3d rotation_facing(const Eigen::Vector3d& forward) {
    // camera axes: x right, y down, z forward; world z is up
    const Eigen::Vector3d f = forward.normalized();
    Eigen::Vector3d right = f.cross(Eigen::Vector3d::UnitZ());
    if (right.norm() < 1e-9) right = Eigen::Vector3d::UnitY();  // straight up/down
    right.normalize();
    const Eigen::Vector3d down = f.cross(right);
    Eigen::Matrix3d r_c2w;
    r_c2w.col(0) = right;
    r_c2w.col(1) = down;
    r_c2w.col(2) = f;
    return r_c2w;
}

std::vector<Eigen::Vector3d> path_centers(TrajectoryKind kind, int frames, double step) {
    std::vector<Eigen::Vector3d> c;
    c.reserve(frames);
    switch (kind) {
        case TrajectoryKind::line:
            for (int i = 0; i < frames; ++i) c.emplace_back(i * step, 0.0, 0.0);
            break;
        case TrajectoryKind::loop: {
            const double r = frames * step / (2 * kPi);
            for (int i = 0; i < frames; ++i) {
                const double a = 2 * kPi * i / frames;
                c.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
            }
            break;
        }
        case TrajectoryKind::lawnmower: {
            const int row_len = std::max(2, int(std::ceil(std::sqrt(double(frames)))));
            int x = 0, y = 0, dir = 1;
            for (int i = 0; i < frames; ++i) {
                c.emplace_back(x * step, y * step, 0.0);
                if ((dir > 0 && x + 1 < row_len) || (dir < 0 && x > 0))
                    x += dir;
                else {
                    ++y;  // turn: one step in +y, then reverse
                    dir = -dir;
                }
            }
            break;
        }
        case TrajectoryKind::stacked_loops: {
            const int per_loop = 16;
            const double chord = 0.9 * step;
            const double climb = std::sqrt(step * step - chord * chord);
            const double r = chord / (2 * std::sin(kPi / per_loop));
            for (int i = 0; i < frames; ++i) {
                const double a = 2 * kPi * i / per_loop;
                c.emplace_back(r * std::cos(a), r * std::sin(a), climb * i);
            }
            break;
        }
    }
    return c;
}

}  // namespace

TrajectoryKind trajectory_kind_from_string(const std::string& name) {
    if (name == "line") return TrajectoryKind::line;
    if (name == "loop") return TrajectoryKind::loop;
    if (name == "lawnmower") return TrajectoryKind::lawnmower;
    if (name == "stacked-loops" || name == "stacked_loops") return TrajectoryKind::stacked_loops;
    throw ArgumentError("unknown trajectory kind: " + name);
}

Trajectory gen_trajectory(TrajectoryKind kind, int frames, double step, std::uint64_t seed) {
    if (frames < 2) throw ArgumentError("trajectory needs at least 2 frames");
    if (step <= 0) throw ArgumentError("step must be positive");
    (void)seed;  // paths are deterministic; seed kept for interface stability

    const auto centers = path_centers(kind, frames, step);
    Trajectory traj;
    traj.poses.reserve(frames);
    Eigen::Matrix3d r_prev = Eigen::Matrix3d::Identity();
    for (int i = 0; i < frames; ++i) {
        Eigen::Vector3d tangent;
        if (i + 1 < frames)
            tangent = centers[i + 1] - centers[i];
        else
            tangent = centers[i] - centers[i - 1];
        Eigen::Matrix3d r_c2w = tangent.norm() < 1e-12 ? r_prev : rotation_facing(tangent);
        r_prev = r_c2w;
        traj.poses.push_back(CameraPose::from_c2w(i, r_c2w, centers[i]));
    }
    return traj;
}

PointCloud gen_point_cloud(const Trajectory& traj, int count, double margin, std::uint64_t seed) {
    if (count < 1) throw ArgumentError("point count must be positive");
    Eigen::Vector3d lo = traj.poses.front().center();
    Eigen::Vector3d hi = lo;
    for (const auto& p : traj.poses) {
        lo = lo.cwiseMin(p.center());
        hi = hi.cwiseMax(p.center());
    }
    lo.array() -= margin;
    hi.array() += margin;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> byte(0, 255);

    PointCloud cloud;
    cloud.points.reserve(count);
    cloud.colors.reserve(count);
    for (int i = 0; i < count; ++i) {
        Eigen::Vector3d p;
        for (int k = 0; k < 3; ++k) p[k] = lo[k] + (hi[k] - lo[k]) * u01(rng);
        cloud.points.push_back(p);
        cloud.colors.push_back({std::uint8_t(byte(rng)), std::uint8_t(byte(rng)),
                                std::uint8_t(byte(rng))});
    }
    return cloud;
}

Sim3 random_sim3(std::uint64_t seed, double scale_min, double scale_max, double max_angle_rad,
                 double max_translation) {
    if (scale_min <= 0 || scale_max < scale_min) throw ArgumentError("bad scale range");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    Sim3 g;
    g.s = std::exp(std::log(scale_min) + (std::log(scale_max) - std::log(scale_min)) * u01(rng));

    // uniform direction via normalized gaussian triple
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Vector3d axis(gauss(rng), gauss(rng), gauss(rng));
    while (axis.norm() < 1e-9) axis = {gauss(rng), gauss(rng), gauss(rng)};
    axis.normalize();
    const double angle = max_angle_rad * u01(rng);
    g.q = Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis)).normalized();

    Eigen::Vector3d dir(gauss(rng), gauss(rng), gauss(rng));
    while (dir.norm() < 1e-9) dir = {gauss(rng), gauss(rng), gauss(rng)};
    dir.normalize();
    g.t = dir * (max_translation * u01(rng));
    return g;
}

PerturbedBlock perturb_block(const Trajectory& traj, const PointCloud& cloud, const Sim3& g,
                             double point_noise_sigma, std::uint64_t seed) {
    if (point_noise_sigma < 0) throw ArgumentError("noise sigma must be non-negative");
    PerturbedBlock out;
    out.applied = g;
    out.trajectory = transformed(traj, g);
    out.cloud = transformed(cloud, g);
    if (point_noise_sigma > 0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, point_noise_sigma);
        for (auto& p : out.cloud.points) p += Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
    }
    return out;
}

// --- textures -------------------------------------------------------------

BandTexture BandTexture::make(std::uint64_t seed, int term_count, int max_freq) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> freq(2, std::max(3, max_freq));

    BandTexture tex;
    tex.terms.reserve(term_count);
    for (int i = 0; i < term_count; ++i) {
        Term t;
        t.freq_phi = freq(rng);
        t.freq_theta = 1.0 + u01(rng) * 12.0;
        t.phase_phi = 2 * kPi * u01(rng);
        t.phase_theta = 2 * kPi * u01(rng);
        t.amplitude = 0.4 + 0.6 * u01(rng);
        tex.terms.push_back(t);
    }
    double total = 0.0;
    for (const auto& t : tex.terms) total += t.amplitude;
    for (auto& t : tex.terms) t.amplitude /= total;  // sum of |amplitudes| = 1
    return tex;
}

double BandTexture::value(double theta, double phi) const {
    const double d = theta - kPi / 2;
    const double envelope = std::exp(-d * d / (2 * envelope_sigma * envelope_sigma));
    double s = 0.0;
    for (const auto& t : terms)
        s += t.amplitude * std::sin(t.freq_phi * phi + t.phase_phi) *
             std::cos(t.freq_theta * theta + t.phase_theta);
    return 0.5 + 0.5 * envelope * s;
}

Image8 gen_equirect(EquirectTexture kind, int width, int height, std::uint64_t seed) {
    if (width != 2 * height) throw ArgumentError("equirect must have width = 2 * height");
    Image8 img = Image8::create(width, height, 3);

    if (kind == EquirectTexture::checker) {
        for (int y = 0; y < height; ++y) {
            const double theta = kPi * (y + 0.5) / height;
            const int ti = int(std::floor(theta / (kPi / 8)));
            for (int x = 0; x < width; ++x) {
                const double phi = 2 * kPi * (x + 0.5) / width;
                const int pi_ = int(std::floor(phi / (kPi / 8)));
                const bool on = (ti + pi_) % 2 == 0;
                const std::uint8_t v = on ? 220 : 35;
                img.at(x, y, 0) = v;
                img.at(x, y, 1) = on ? 180 : 60;
                img.at(x, y, 2) = on ? 90 : 140;
            }
        }
        return img;
    }

    const BandTexture tex = BandTexture::make(seed);
    for (int y = 0; y < height; ++y) {
        const double theta = kPi * (y + 0.5) / height;
        for (int x = 0; x < width; ++x) {
            const double phi = 2 * kPi * (x + 0.5) / width;
            const double v = tex.value(theta, phi);
            const std::uint8_t g = std::uint8_t(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
            img.at(x, y, 0) = g;
            img.at(x, y, 1) = g;
            img.at(x, y, 2) = g;
        }
    }
    return img;
}

// --- room renders ----------------------------------------------------------

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double lattice_value(std::uint64_t seed, int face, long ix, long iy) {
    std::uint64_t h = mix64(seed ^ mix64(std::uint64_t(face) + 0x517cc1b727220a95ULL));
    h = mix64(h ^ std::uint64_t(ix) * 0x9ddfea08eb382d69ULL);
    h = mix64(h ^ std::uint64_t(iy) * 0xc2b2ae3d27d4eb4fULL);
    return double(h >> 11) / double(1ULL << 53);
}

double smoothstep(double t) { return t * t * (3 - 2 * t); }

double value_noise(std::uint64_t seed, int face, double x, double y) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const long ix = long(fx);
    const long iy = long(fy);
    const double tx = smoothstep(x - fx);
    const double ty = smoothstep(y - fy);
    const double v00 = lattice_value(seed, face, ix, iy);
    const double v10 = lattice_value(seed, face, ix + 1, iy);
    const double v01 = lattice_value(seed, face, ix, iy + 1);
    const double v11 = lattice_value(seed, face, ix + 1, iy + 1);
    return (v00 * (1 - tx) + v10 * tx) * (1 - ty) + (v01 * (1 - tx) + v11 * tx) * ty;
}

}  // namespace

double RoomScene::wall_value(int box_face, double u, double v) const {
    double total = 0.0;
    double amp = 1.0;
    double freq = texture_scale;
    double norm = 0.0;
    for (int o = 0; o < octaves; ++o) {
        total += amp * value_noise(seed + o * 1315423911ULL, box_face, u * freq, v * freq);
        norm += amp;
        amp *= 0.55;
        freq *= 2.1;
    }
    return total / norm;
}

Image8 render_room_face(const RoomScene& room, const CameraPose& pose, const FaceFrame& frame,
                        int face_size) {
    const Eigen::Vector3d origin = pose.center();
    const Eigen::Matrix3d r_c2w = pose.rotation_c2w();
    Image8 img = Image8::create(face_size, face_size, 1);

    for (int v = 0; v < face_size; ++v) {
        for (int u = 0; u < face_size; ++u) {
            const Eigen::Vector3d d_cam = face_pixel_direction(frame, u, v, face_size);
            const Eigen::Vector3d d = (r_c2w * d_cam).normalized();

            // exit point of the ray from inside the box
            double t_hit = std::numeric_limits<double>::infinity();
            int hit_face = -1;
            for (int axis = 0; axis < 3; ++axis) {
                if (std::abs(d[axis]) < 1e-12) continue;
                for (int side = 0; side < 2; ++side) {
                    const double plane =
                        side ? room.max_corner[axis] : room.min_corner[axis];
                    const double t = (plane - origin[axis]) / d[axis];
                    if (t > 1e-9 && t < t_hit) {
                        const Eigen::Vector3d hit = origin + t * d;
                        bool inside = true;
                        for (int k = 0; k < 3; ++k) {
                            if (k == axis) continue;
                            if (hit[k] < room.min_corner[k] - 1e-9 ||
                                hit[k] > room.max_corner[k] + 1e-9)
                                inside = false;
                        }
                        if (inside) {
                            t_hit = t;
                            hit_face = axis * 2 + side;
                        }
                    }
                }
            }

            double value = 0.5;
            if (hit_face >= 0) {
                const Eigen::Vector3d hit = origin + t_hit * d;
                const int axis = hit_face / 2;
                const int ua = (axis + 1) % 3;
                const int va = (axis + 2) % 3;
                value = room.wall_value(hit_face, hit[ua], hit[va]);
                // simple distance shading keeps walls distinguishable
                value = value * 0.85 + 0.15 * std::exp(-0.05 * t_hit);
            }
            img.at(u, v) = std::uint8_t(std::lround(std::clamp(value, 0.0, 1.0) * 255.0));
        }
    }
    return img;
}

std::vector<Image8> render_room_cubemap(const RoomScene& room, const CameraPose& pose,
                                        int face_size) {
    std::vector<Image8> faces;
    faces.reserve(kSideFaceCount);
    for (int i = 0; i < kSideFaceCount; ++i)
        faces.push_back(render_room_face(room, pose, side_face_frame(side_face_yaw(i)),
                                         face_size));
    return faces;
}

}  // namespace panoblock
