#include "panoblock/projection/cubemap.hpp"

#include <algorithm>
#include <cmath>

#include "panoblock/error.hpp"
#include "panoblock/parallel.hpp"

namespace panoblock {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

const char* const kSideFaceNames[kSideFaceCount] = {
    "front", "left", "back", "right", "front45", "left45", "back45", "right45"};

double side_face_yaw(int face_index) {
    // 0..3 axis-aligned at 0, pi/2, pi, 3pi/2; 4..7 the same plus pi/4
    return (face_index % 4) * (kPi / 2) + (face_index / 4) * (kPi / 4);
}

FaceFrame side_face_frame(double yaw) {
    FaceFrame f;
    f.center = {std::cos(yaw), std::sin(yaw), 0.0};
    f.right = {-std::sin(yaw), std::cos(yaw), 0.0};
    f.down = {0.0, 0.0, -1.0};
    return f;
}

FaceFrame top_face_frame() {
    return {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
}

FaceFrame bottom_face_frame() {
    return {{0, 0, -1}, {0, 1, 0}, {-1, 0, 0}};
}

Eigen::Vector3d face_pixel_direction(const FaceFrame& frame, double u, double v, int face_size) {
    const double a = 2.0 * (u + 0.5) / face_size - 1.0;
    const double b = 2.0 * (v + 0.5) / face_size - 1.0;
    return frame.center + a * frame.right + b * frame.down;
}

void direction_to_spherical(const Eigen::Vector3d& d, double& theta, double& phi) {
    const double n = d.norm();
    theta = std::acos(std::clamp(d.z() / n, -1.0, 1.0));
    phi = std::atan2(d.y(), d.x());
    if (phi < 0) phi += 2 * kPi;
}

namespace {

// Bilinear sample at fractional equirect coordinates, plus an integer column
// offset applied in index arithmetic so whole-column rotations of the yaw
// stay exact. xf may be out of range (wrapped); yf is clamped.
void sample_equirect_xy(const Image8& image, double xf, double yf, int col_offset, double* out) {
    const int w = image.width;
    const int h = image.height;
    xf -= std::floor(xf / w) * w;  // wrap into [0, w)
    yf = std::clamp(yf, 0.0, double(h - 1));

    int x0 = int(std::floor(xf));
    const int y0 = int(yf);
    const double fx = xf - x0;
    const double fy = yf - y0;
    x0 = (x0 + col_offset) % w;
    const int x1 = (x0 + 1) % w;
    const int y1 = std::min(y0 + 1, h - 1);

    for (int c = 0; c < image.channels; ++c) {
        const double top = image.at(x0, y0, c) * (1 - fx) + image.at(x1, y0, c) * fx;
        const double bot = image.at(x0, y1, c) * (1 - fx) + image.at(x1, y1, c) * fx;
        out[c] = top * (1 - fy) + bot * fy;
    }
}

}  // namespace

void sample_equirect(const Image8& image, double theta, double phi, double* out) {
    // pixel centers: phi = 2pi*(x+0.5)/W, theta = pi*(y+0.5)/H
    const double xf = phi / (2 * kPi) * image.width - 0.5;
    const double yf = theta / kPi * image.height - 0.5;
    sample_equirect_xy(image, xf, yf, 0, out);
}

namespace {

// Side faces share one local geometry (yaw 0); the yaw enters as a column
// shift of eighths * W / 8. The integer part shifts indices exactly, so
// rotating the frame by whole columns commutes with projection bitwise.
void project_side_face(const Image8& equirect, int eighths, int face_size, Image8& out,
                       int jobs) {
    const int w = equirect.width;
    const int h = equirect.height;
    const long shift_num = long(eighths) * w;
    const int col_offset = int(shift_num / 8);
    const double frac_cols = double(shift_num % 8) / 8.0;
    parallel_for(
        std::size_t(face_size),
        [&](std::size_t v) {
            double px[3];
            const double b = 2.0 * (double(v) + 0.5) / face_size - 1.0;
            for (int u = 0; u < face_size; ++u) {
                const double a = 2.0 * (double(u) + 0.5) / face_size - 1.0;
                // local direction at yaw 0: center (1,0,0) + a*(0,1,0) + b*(0,0,-1)
                const double n = std::sqrt(1.0 + a * a + b * b);
                const double theta = std::acos(std::clamp(-b / n, -1.0, 1.0));
                const double phi = std::atan2(a, 1.0);
                const double xf = phi / (2 * kPi) * w - 0.5 + frac_cols;
                const double yf = theta / kPi * h - 0.5;
                sample_equirect_xy(equirect, xf, yf, col_offset, px);
                for (int c = 0; c < equirect.channels; ++c)
                    out.at(u, int(v), c) =
                        std::uint8_t(std::lround(std::clamp(px[c], 0.0, 255.0)));
            }
        },
        jobs);
}

void project_face(const Image8& equirect, const FaceFrame& frame, int face_size, Image8& out,
                  int jobs) {
    parallel_for(
        std::size_t(face_size),
        [&](std::size_t v) {
            double px[3];
            for (int u = 0; u < face_size; ++u) {
                const Eigen::Vector3d d =
                    face_pixel_direction(frame, double(u), double(v), face_size);
                double theta, phi;
                direction_to_spherical(d, theta, phi);
                sample_equirect(equirect, theta, phi, px);
                for (int c = 0; c < equirect.channels; ++c)
                    out.at(u, int(v), c) = std::uint8_t(std::lround(std::clamp(px[c], 0.0, 255.0)));
            }
        },
        jobs);
}

}  // namespace

CubemapSet equirect_to_cubemap(const Image8& equirect, int face_size, bool with_poles, int jobs) {
    if (face_size < 2) throw ArgumentError("face_size must be at least 2");
    if (equirect.empty()) throw ArgumentError("empty equirect frame");
    if (equirect.width != 2 * equirect.height)
        throw ArgumentError("equirect frame must have width = 2 * height");

    CubemapSet cube;
    cube.face_size = face_size;
    cube.has_poles = with_poles;
    const int n = kSideFaceCount + (with_poles ? 2 : 0);
    cube.faces.reserve(n);
    cube.names.reserve(n);
    for (int i = 0; i < kSideFaceCount; ++i) {
        cube.names.push_back(kSideFaceNames[i]);
        cube.faces.push_back(Image8::create(face_size, face_size, equirect.channels));
        const int eighths = 2 * (i % 4) + i / 4;  // yaw in units of pi/4
        project_side_face(equirect, eighths, face_size, cube.faces.back(), jobs);
    }
    if (with_poles) {
        for (const char* name : {"top", "bottom"}) {
            cube.names.push_back(name);
            cube.faces.push_back(Image8::create(face_size, face_size, equirect.channels));
            project_face(equirect, std::string(name) == "top" ? top_face_frame()
                                                              : bottom_face_frame(),
                         face_size, cube.faces.back(), jobs);
        }
    }
    return cube;
}

BandImage cubemap_to_equirect(const CubemapSet& cube, int width, int height, int jobs) {
    if (int(cube.faces.size()) < kSideFaceCount) throw ArgumentError("cubemap set lacks side faces");
    if (width != 2 * height) throw ArgumentError("equirect target must have width = 2 * height");
    const int fs = cube.face_size;
    const int channels = cube.faces[0].channels;

    BandImage band;
    band.image = Image8::create(width, height, channels);
    band.valid.assign(std::size_t(width) * height, 0);

    FaceFrame frames[4];
    for (int i = 0; i < 4; ++i) frames[i] = side_face_frame(side_face_yaw(i));

    parallel_for(
        std::size_t(height),
        [&](std::size_t yi) {
            const int y = int(yi);
            const double theta = kPi * (y + 0.5) / height;
            if (std::abs(theta - kPi / 2) > kPi / 4) return;
            for (int x = 0; x < width; ++x) {
                const double phi = 2 * kPi * (x + 0.5) / width;
                // nearest axis-aligned yaw sector
                int face = int(std::floor(phi / (kPi / 2) + 0.5)) % 4;
                const FaceFrame& fr = frames[face];
                const Eigen::Vector3d d{std::sin(theta) * std::cos(phi),
                                        std::sin(theta) * std::sin(phi), std::cos(theta)};
                const double depth = d.dot(fr.center);
                const double a = d.dot(fr.right) / depth;
                const double b = d.dot(fr.down) / depth;
                // face pixel coords; clamp handles the band corners that
                // spill past the side faces' vertical extent
                const double uf = std::clamp((a + 1) * fs / 2 - 0.5, 0.0, double(fs - 1));
                const double vf = std::clamp((b + 1) * fs / 2 - 0.5, 0.0, double(fs - 1));
                const int u0 = std::min(int(uf), fs - 2);
                const int v0 = std::min(int(vf), fs - 2);
                const double fu = uf - u0;
                const double fv = vf - v0;
                const Image8& img = cube.faces[face];
                for (int c = 0; c < channels; ++c) {
                    const double top =
                        img.at(u0, v0, c) * (1 - fu) + img.at(u0 + 1, v0, c) * fu;
                    const double bot =
                        img.at(u0, v0 + 1, c) * (1 - fu) + img.at(u0 + 1, v0 + 1, c) * fu;
                    const double val = top * (1 - fv) + bot * fv;
                    band.image.at(x, y, c) =
                        std::uint8_t(std::lround(std::clamp(val, 0.0, 255.0)));
                }
                band.valid[std::size_t(y) * width + x] = 1;
            }
        },
        jobs);
    return band;
}

}  // namespace panoblock
