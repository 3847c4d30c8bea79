#include "panoblock/partition/partition.hpp"

#include <algorithm>
#include <cmath>

#include "panoblock/error.hpp"

namespace panoblock {

std::vector<BlockManifest> partition_flight(int frame_count, int blocks, double overlap_fraction,
                                            int flight_id, int first_block_id) {
    if (blocks < 1) throw ArgumentError("block count must be at least 1");
    if (blocks > frame_count) throw ArgumentError("more blocks requested than frames available");
    if (overlap_fraction < 0.0 || overlap_fraction >= 1.0)
        throw ArgumentError("overlap fraction must be in [0, 1)");

    const int n = frame_count;
    const int k = blocks;
    const double denom = k - (k - 1) * overlap_fraction;
    const int len = int(std::ceil(n / denom));
    const int stride = len - int(std::floor(overlap_fraction * len));

    std::vector<BlockManifest> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        const int start = std::min(i * stride, n - len);
        BlockManifest m;
        m.block_id = first_block_id + i;
        m.flight_id = flight_id;
        m.frames = {start, start + len - 1};
        out.push_back(m);
    }
    for (int i = 0; i < k; ++i) {
        if (i > 0) out[i].overlap_prev = intersect(out[i].frames, out[i - 1].frames);
        if (i + 1 < k) out[i].overlap_next = intersect(out[i].frames, out[i + 1].frames);
        validate(out[i]);
    }
    return out;
}

PartitionPlan plan_multi_flight(const std::vector<int>& frame_counts,
                                const std::vector<int>& blocks_per_flight,
                                double overlap_fraction) {
    if (frame_counts.empty()) throw ArgumentError("at least one flight required");
    if (frame_counts.size() != blocks_per_flight.size())
        throw ArgumentError("frame_counts and blocks_per_flight length mismatch");

    PartitionPlan plan;
    plan.overlap_fraction = overlap_fraction;
    int next_block = 0;
    for (std::size_t f = 0; f < frame_counts.size(); ++f) {
        auto blocks =
            partition_flight(frame_counts[f], blocks_per_flight[f], overlap_fraction, int(f),
                             next_block);
        next_block += int(blocks.size());
        plan.blocks.insert(plan.blocks.end(), blocks.begin(), blocks.end());
    }
    return plan;
}

}  // namespace panoblock
