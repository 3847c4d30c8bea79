#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

namespace panoblock {

// Inclusive frame range.
struct FrameRange {
    long first = 0;
    long last = 0;

    long length() const { return last - first + 1; }
    bool contains(long frame) const { return frame >= first && frame <= last; }
    bool operator==(const FrameRange&) const = default;
};

std::optional<FrameRange> intersect(const FrameRange& a, const FrameRange& b);

struct BlockManifest {
    int block_id = 0;
    int flight_id = 0;
    FrameRange frames;
    // Overlap with the previous/next block of the same flight. Cross-flight
    // overlaps are discovered by image similarity, not recorded here.
    std::optional<FrameRange> overlap_prev;
    std::optional<FrameRange> overlap_next;

    bool operator==(const BlockManifest&) const = default;
};

// Throws DataError on inverted ranges or overlaps outside the frame range.
void validate(const BlockManifest& manifest);

struct PartitionPlan {
    double overlap_fraction = 0.25;
    std::vector<BlockManifest> blocks;

    int flight_count() const;
};

void to_json(nlohmann::json& j, const BlockManifest& m);
void from_json(const nlohmann::json& j, BlockManifest& m);
void to_json(nlohmann::json& j, const PartitionPlan& plan);
void from_json(const nlohmann::json& j, PartitionPlan& plan);

// blocks.json with an explicit schema version field.
void save_plan(const std::filesystem::path& path, const PartitionPlan& plan);
PartitionPlan load_plan(const std::filesystem::path& path);

}  // namespace panoblock
