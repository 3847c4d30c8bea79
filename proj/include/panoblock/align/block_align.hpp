#pragma once

#include <optional>
#include <vector>

#include "panoblock/align/coarse.hpp"
#include "panoblock/align/icp.hpp"
#include "panoblock/scene/manifest.hpp"
#include "panoblock/scene/point_cloud.hpp"
#include "panoblock/scene/pose.hpp"

namespace panoblock {

struct BlockData {
    BlockManifest manifest;
    Trajectory trajectory;
    PointCloud cloud;
};

// Overlap between two same-flight neighbors, read from their manifests.
// Throws DataError when the manifests record none.
OverlapSpec overlap_from_manifests(const BlockManifest& b1, const BlockManifest& b2);

// Builds an overlap window in block 1 around a matched frame: the window has
// the length of block 2's leading overlap_frames and starts at the frame of
// block 1 found most similar to block 2's first frame.
OverlapSpec overlap_from_similarity(const BlockManifest& b1, const BlockManifest& b2,
                                    long matched_frame_in_b1, long overlap_frames);

// Points owned by the given frames: a cloud point belongs to the frame whose
// camera center is nearest, and survives when that frame lies in the range.
PointCloud overlap_points(const PointCloud& cloud, const Trajectory& trajectory,
                          const FrameRange& frames);

// Full coarse-to-fine alignment of block 2 onto block 1: scale from mean
// step lengths, rotation/translation from overlap means, trimmed scaled ICP
// of block 2's overlap-region points against block 1's cloud. The reported
// transforms map block-2 coordinates into block-1 coordinates.
AlignmentReport align_blocks(const BlockData& b1, const BlockData& b2, const OverlapSpec& overlap,
                             const IcpParams& params = {});

// Chains pairwise results into per-block global transforms: block 0 is the
// reference (identity); block k maps through h_k = h_{k-1} * g_k.
std::vector<Sim3> chain_transforms(const std::vector<AlignmentReport>& pairwise);

}  // namespace panoblock
