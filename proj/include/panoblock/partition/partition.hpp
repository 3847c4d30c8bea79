#pragma once

#include <vector>

#include "panoblock/scene/manifest.hpp"

namespace panoblock {

// Splits one flight of frame_count frames into k equal-length blocks with a
// target overlap fraction between neighbors. Block length L = ceil(N / (k -
// (k-1)*rho)), stride L - floor(rho*L); any block that would run past the
// last frame is shifted left to end at N-1, so coverage and equal length
// both hold.
std::vector<BlockManifest> partition_flight(int frame_count, int blocks, double overlap_fraction,
                                            int flight_id = 0, int first_block_id = 0);

// Concatenates per-flight partitions into one plan. Cross-flight overlaps
// are left unset; they are discovered later from image similarity.
PartitionPlan plan_multi_flight(const std::vector<int>& frame_counts,
                                const std::vector<int>& blocks_per_flight,
                                double overlap_fraction);

}  // namespace panoblock
