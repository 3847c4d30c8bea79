#include "panoblock/scene/manifest.hpp"

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "panoblock/error.hpp"

namespace panoblock {

namespace {

constexpr int kSchemaVersion = 1;

nlohmann::json range_to_json(const FrameRange& r) { return nlohmann::json{r.first, r.last}; }

FrameRange range_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw DataError("frame range must be [first, last]");
    return FrameRange{j[0].get<long>(), j[1].get<long>()};
}

}  // namespace

std::optional<FrameRange> intersect(const FrameRange& a, const FrameRange& b) {
    const long first = std::max(a.first, b.first);
    const long last = std::min(a.last, b.last);
    if (first > last) return std::nullopt;
    return FrameRange{first, last};
}

void validate(const BlockManifest& m) {
    const std::string tag = "block " + std::to_string(m.block_id) + ": ";
    if (m.frames.first > m.frames.last) throw DataError(tag + "inverted frame range");
    for (const auto& overlap : {m.overlap_prev, m.overlap_next}) {
        if (!overlap) continue;
        if (overlap->first > overlap->last) throw DataError(tag + "inverted overlap range");
        if (overlap->first < m.frames.first || overlap->last > m.frames.last) {
            throw DataError(tag + "overlap range outside frame range");
        }
    }
}

int PartitionPlan::flight_count() const {
    std::set<int> flights;
    for (const BlockManifest& b : blocks) flights.insert(b.flight_id);
    return static_cast<int>(flights.size());
}

void to_json(nlohmann::json& j, const BlockManifest& m) {
    j = nlohmann::json{{"block_id", m.block_id},
                       {"flight_id", m.flight_id},
                       {"frame_range", range_to_json(m.frames)}};
    j["overlap_prev"] = m.overlap_prev ? range_to_json(*m.overlap_prev) : nlohmann::json();
    j["overlap_next"] = m.overlap_next ? range_to_json(*m.overlap_next) : nlohmann::json();
}

void from_json(const nlohmann::json& j, BlockManifest& m) {
    m.block_id = j.at("block_id").get<int>();
    m.flight_id = j.at("flight_id").get<int>();
    m.frames = range_from_json(j.at("frame_range"));
    m.overlap_prev.reset();
    m.overlap_next.reset();
    if (j.contains("overlap_prev") && !j["overlap_prev"].is_null()) {
        m.overlap_prev = range_from_json(j["overlap_prev"]);
    }
    if (j.contains("overlap_next") && !j["overlap_next"].is_null()) {
        m.overlap_next = range_from_json(j["overlap_next"]);
    }
    validate(m);
}

void to_json(nlohmann::json& j, const PartitionPlan& plan) {
    j = nlohmann::json{{"schema_version", kSchemaVersion},
                       {"overlap_fraction", plan.overlap_fraction},
                       {"blocks", plan.blocks}};
}

void from_json(const nlohmann::json& j, PartitionPlan& plan) {
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion) {
        throw DataError("unsupported blocks.json schema version " + std::to_string(version));
    }
    plan.overlap_fraction = j.at("overlap_fraction").get<double>();
    plan.blocks = j.at("blocks").get<std::vector<BlockManifest>>();
}

void save_plan(const std::filesystem::path& path, const PartitionPlan& plan) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << nlohmann::json(plan).dump(2) << "\n";
}

PartitionPlan load_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return j.get<PartitionPlan>();
}

}  // namespace panoblock
