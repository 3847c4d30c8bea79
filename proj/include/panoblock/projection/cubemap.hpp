#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "panoblock/image/image.hpp"

namespace panoblock {

// The eight 90-degree side faces: four axis-aligned yaws plus the same set
// rotated 45 degrees about z. Poles are optional extras for debugging.
inline constexpr int kSideFaceCount = 8;
extern const char* const kSideFaceNames[kSideFaceCount];

double side_face_yaw(int face_index);

struct CubemapSet {
    int face_size = 0;
    std::vector<Image8> faces;
    std::vector<std::string> names;   // parallel to faces
    bool has_poles = false;           // faces 8, 9 are top, bottom when set
};

// Local orthonormal frame of a cube face at unit distance from the center.
struct FaceFrame {
    Eigen::Vector3d center;
    Eigen::Vector3d right;
    Eigen::Vector3d down;
};

FaceFrame side_face_frame(double yaw);
FaceFrame top_face_frame();
FaceFrame bottom_face_frame();

// Ray through pixel (u, v) of a face_size x face_size face, 90-degree FOV.
// Not normalized; the caller converts to spherical angles.
Eigen::Vector3d face_pixel_direction(const FaceFrame& frame, double u, double v, int face_size);

// theta = arccos(z / |d|), phi = atan2(y, x) wrapped to [0, 2pi).
void direction_to_spherical(const Eigen::Vector3d& d, double& theta, double& phi);

// Bilinear lookup of an equirect image at spherical angles, wrapping phi at
// the seam and clamping theta at the poles. out must hold image.channels.
void sample_equirect(const Image8& image, double theta, double phi, double* out);

CubemapSet equirect_to_cubemap(const Image8& equirect, int face_size, bool with_poles = false,
                               int jobs = 1);

// Partial inverse covering the band |theta - pi/2| <= pi/4 from the four
// axis-aligned faces; valid[i] marks band pixels.
struct BandImage {
    Image8 image;
    std::vector<std::uint8_t> valid;
};

BandImage cubemap_to_equirect(const CubemapSet& cube, int width, int height, int jobs = 1);

}  // namespace panoblock
