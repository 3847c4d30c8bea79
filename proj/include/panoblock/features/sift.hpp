#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "panoblock/image/image.hpp"

namespace panoblock {

struct Keypoint {
    float x = 0.f;            // input-image pixels
    float y = 0.f;
    float scale = 0.f;        // absolute sigma
    float orientation = 0.f;  // radians
};

struct KeypointSet {
    std::vector<Keypoint> keypoints;
    std::vector<std::array<float, 128>> descriptors;  // L2-normalized

    std::size_t size() const { return keypoints.size(); }
};

struct FeatureParams {
    int octave_layers = 3;
    float sigma0 = 1.6f;
    float contrast_threshold = 0.04f;  // on [0,1] intensities, scaled by layer count
    float edge_ratio = 10.f;
    int max_octaves = 8;
};

// Scale-space extrema with oriented gradient-histogram descriptors
// (Lowe-style DoG detector, 4x4x8 descriptor). Deterministic.
KeypointSet detect_and_describe(const ImageF& gray, const FeatureParams& params = {});
KeypointSet detect_and_describe(const Image8& image, const FeatureParams& params = {});

// Mutual nearest neighbors passing the ratio test in both directions.
// Symmetric in its arguments by construction.
int match_count(const KeypointSet& a, const KeypointSet& b, float ratio = 0.75f);

}  // namespace panoblock
