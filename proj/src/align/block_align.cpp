#include "panoblock/align/block_align.hpp"

#include <string>

#include "panoblock/error.hpp"
#include "panoblock/spatial/kdtree.hpp"

namespace panoblock {

OverlapSpec overlap_from_manifests(const BlockManifest& b1, const BlockManifest& b2) {
    if (b1.flight_id != b2.flight_id)
        throw DataError("blocks " + std::to_string(b1.block_id) + " and " +
                        std::to_string(b2.block_id) +
                        " are from different flights; overlap must come from image similarity");
    const auto shared = intersect(b1.frames, b2.frames);
    if (!shared)
        throw DataError("blocks " + std::to_string(b1.block_id) + " and " +
                        std::to_string(b2.block_id) + " share no frames");
    OverlapSpec spec;
    spec.block1 = *shared;
    spec.block2 = *shared;  // same flight: identical global frame ids
    spec.source = OverlapSource::manifest;
    return spec;
}

OverlapSpec overlap_from_similarity(const BlockManifest& b1, const BlockManifest& b2,
                                    long matched_frame_in_b1, long overlap_frames) {
    if (overlap_frames < 1) throw ArgumentError("overlap window must hold at least 1 frame");
    if (!b1.frames.contains(matched_frame_in_b1))
        throw DataError("matched frame " + std::to_string(matched_frame_in_b1) +
                        " lies outside block " + std::to_string(b1.block_id));
    OverlapSpec spec;
    spec.block1.first = matched_frame_in_b1;
    spec.block1.last = std::min(matched_frame_in_b1 + overlap_frames - 1, b1.frames.last);
    spec.block2.first = b2.frames.first;
    spec.block2.last = std::min(b2.frames.first + (spec.block1.last - spec.block1.first),
                                b2.frames.last);
    // keep the windows the same length when block 2 is the shorter one
    spec.block1.last = spec.block1.first + (spec.block2.last - spec.block2.first);
    spec.source = OverlapSource::similarity;
    return spec;
}

PointCloud overlap_points(const PointCloud& cloud, const Trajectory& trajectory,
                          const FrameRange& frames) {
    const KdTree3 centers(camera_centers(trajectory));
    PointCloud out;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const std::size_t owner = centers.nearest(cloud.points[i]).first;
        if (!frames.contains(trajectory.poses[owner].frame_id)) continue;
        out.points.push_back(cloud.points[i]);
        if (cloud.has_colors()) out.colors.push_back(cloud.colors[i]);
    }
    return out;
}

AlignmentReport align_blocks(const BlockData& b1, const BlockData& b2, const OverlapSpec& overlap,
                             const IcpParams& params) {
    const double scale = coarse_scale(b1.trajectory, b2.trajectory);
    const Sim3 coarse = coarse_rt(b1.trajectory, b2.trajectory, overlap, scale);
    // Only the overlap region is observed by both blocks; geometry seen by one
    // block alone would drag the refinement off the shared structure.
    const PointCloud source = overlap_points(b2.cloud, b2.trajectory, overlap.block2);
    AlignmentReport report = icp_refine(source, b1.cloud, coarse, params);
    return report;
}

std::vector<Sim3> chain_transforms(const std::vector<AlignmentReport>& pairwise) {
    std::vector<Sim3> out;
    out.reserve(pairwise.size() + 1);
    out.push_back(Sim3::identity());
    for (const auto& r : pairwise) out.push_back(out.back() * r.fine);
    return out;
}

}  // namespace panoblock
