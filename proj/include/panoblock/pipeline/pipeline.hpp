#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "panoblock/align/icp.hpp"

namespace panoblock {

struct PipelineConfig {
    // synthetic end-to-end run
    bool synthetic = true;
    std::string trajectory = "lawnmower";
    int frames = 400;
    int blocks = 4;
    double step = 0.1;
    int points = 4000;
    double point_noise = 0.0;  // absolute, scene units
    std::uint64_t seed = 7;

    // real-data run: externally produced inputs
    std::filesystem::path blocks_file;
    std::filesystem::path poses_dir;
    std::filesystem::path clouds_dir;

    std::filesystem::path out_dir = "out";
    double overlap_fraction = 0.25;
    IcpParams icp;
    int jobs = 1;

    void validate() const;  // throws ArgumentError before any stage runs
};

void to_json(nlohmann::json& j, const PipelineConfig& c);
void from_json(const nlohmann::json& j, PipelineConfig& c);

PipelineConfig load_config(const std::filesystem::path& path);

struct StageReport {
    std::string name;
    bool ok = true;
    double seconds = 0.0;
    std::string message;
    std::vector<std::string> artifacts;
};

void to_json(nlohmann::json& j, const StageReport& r);

struct PipelineResult {
    std::vector<StageReport> stages;
    std::filesystem::path report_file;
};

// Runs the stages in dependency order, writing every artifact plus a JSON
// report under config.out_dir. Throws on the first failing stage.
PipelineResult run_pipeline(const PipelineConfig& config);

// Synthetic generation only (scene, partition, perturbed per-block inputs),
// leaving alignment to a later `run` or `align` invocation.
PipelineResult generate_synthetic(const PipelineConfig& config);

// Expected per-block input names for real-data runs.
std::string block_poses_filename(int block_id);
std::string block_cloud_filename(int block_id);

}  // namespace panoblock
