#include "panoblock/pipeline/pipeline.hpp"

#include <chrono>
#include <fstream>

#include "panoblock/align/block_align.hpp"
#include "panoblock/error.hpp"
#include "panoblock/io/colmap.hpp"
#include "panoblock/io/ply.hpp"
#include "panoblock/metrics/alignment_metrics.hpp"
#include "panoblock/partition/partition.hpp"
#include "panoblock/synth/synth.hpp"

namespace panoblock {

namespace fs = std::filesystem;
using nlohmann::json;

void PipelineConfig::validate() const {
    if (overlap_fraction < 0.0 || overlap_fraction >= 1.0)
        throw ArgumentError("overlap_fraction must be in [0, 1)");
    if (icp.keep_fraction <= 0.0 || icp.keep_fraction > 1.0)
        throw ArgumentError("icp.keep_fraction must be in (0, 1]");
    if (icp.max_iterations < 1) throw ArgumentError("icp.max_iterations must be positive");
    if (icp.rel_tolerance <= 0.0) throw ArgumentError("icp.rel_tolerance must be positive");
    if (jobs < 0) throw ArgumentError("jobs must be non-negative");
    if (out_dir.empty()) throw ArgumentError("out_dir must be set");
    if (synthetic) {
        trajectory_kind_from_string(trajectory);  // throws on unknown kinds
        if (blocks < 1) throw ArgumentError("blocks must be at least 1");
        if (frames < 2 * blocks) throw ArgumentError("frames too few for the block count");
        if (step <= 0.0) throw ArgumentError("step must be positive");
        if (points < 100) throw ArgumentError("points must be at least 100");
        if (point_noise < 0.0) throw ArgumentError("point_noise must be non-negative");
    } else {
        if (blocks_file.empty()) throw ArgumentError("blocks_file must be set for real runs");
        if (poses_dir.empty()) throw ArgumentError("poses_dir must be set for real runs");
        if (clouds_dir.empty()) throw ArgumentError("clouds_dir must be set for real runs");
    }
}

void to_json(json& j, const PipelineConfig& c) {
    j = json{{"synthetic", c.synthetic},
             {"trajectory", c.trajectory},
             {"frames", c.frames},
             {"blocks", c.blocks},
             {"step", c.step},
             {"points", c.points},
             {"point_noise", c.point_noise},
             {"seed", c.seed},
             {"blocks_file", c.blocks_file.string()},
             {"poses_dir", c.poses_dir.string()},
             {"clouds_dir", c.clouds_dir.string()},
             {"out_dir", c.out_dir.string()},
             {"overlap_fraction", c.overlap_fraction},
             {"icp",
              {{"keep_fraction", c.icp.keep_fraction},
               {"max_iterations", c.icp.max_iterations},
               {"rel_tolerance", c.icp.rel_tolerance}}},
             {"jobs", c.jobs}};
}

void from_json(const json& j, PipelineConfig& c) {
    c.synthetic = j.value("synthetic", c.synthetic);
    c.trajectory = j.value("trajectory", c.trajectory);
    c.frames = j.value("frames", c.frames);
    c.blocks = j.value("blocks", c.blocks);
    c.step = j.value("step", c.step);
    c.points = j.value("points", c.points);
    c.point_noise = j.value("point_noise", c.point_noise);
    c.seed = j.value("seed", c.seed);
    c.blocks_file = j.value("blocks_file", c.blocks_file.string());
    c.poses_dir = j.value("poses_dir", c.poses_dir.string());
    c.clouds_dir = j.value("clouds_dir", c.clouds_dir.string());
    c.out_dir = j.value("out_dir", c.out_dir.string());
    c.overlap_fraction = j.value("overlap_fraction", c.overlap_fraction);
    if (j.contains("icp")) {
        const auto& i = j.at("icp");
        c.icp.keep_fraction = i.value("keep_fraction", c.icp.keep_fraction);
        c.icp.max_iterations = i.value("max_iterations", c.icp.max_iterations);
        c.icp.rel_tolerance = i.value("rel_tolerance", c.icp.rel_tolerance);
    }
    c.jobs = j.value("jobs", c.jobs);
}

PipelineConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ArgumentError("config parse error in " + path.string() + ": " + e.what());
    }
    PipelineConfig c;
    from_json(j, c);
    return c;
}

void to_json(json& j, const StageReport& r) {
    j = json{{"name", r.name},
             {"ok", r.ok},
             {"seconds", r.seconds},
             {"message", r.message},
             {"artifacts", r.artifacts}};
}

std::string block_poses_filename(int block_id) {
    return "block_" + std::to_string(block_id) + "_images.txt";
}

std::string block_cloud_filename(int block_id) {
    return "block_" + std::to_string(block_id) + ".ply";
}

namespace {

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

PointCloud crop_cloud(const PointCloud& cloud, const Trajectory& traj, double margin) {
    Eigen::Vector3d lo = traj.poses.front().center();
    Eigen::Vector3d hi = lo;
    for (const auto& p : traj.poses) {
        lo = lo.cwiseMin(p.center());
        hi = hi.cwiseMax(p.center());
    }
    lo.array() -= margin;
    hi.array() += margin;
    PointCloud out;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const auto& p = cloud.points[i];
        if ((p.array() >= lo.array()).all() && (p.array() <= hi.array()).all()) {
            out.points.push_back(p);
            if (cloud.has_colors()) out.colors.push_back(cloud.colors[i]);
        }
    }
    return out;
}

struct StageTimer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

json deviation_json(const Sim3Deviation& d, double diameter) {
    return json{{"scale_rel", d.scale_rel},
                {"rotation_deg", d.rotation_rad * 180.0 / 3.14159265358979323846},
                {"translation", d.translation_norm},
                {"translation_rel_diameter", diameter > 0 ? d.translation_norm / diameter : 0.0}};
}

PipelineResult run_synthetic(const PipelineConfig& cfg, bool with_align) {
    PipelineResult result;
    const fs::path out = cfg.out_dir;
    fs::create_directories(out);

    // ---- synth: ground-truth scene
    StageTimer t_synth;
    const Trajectory global_traj =
        gen_trajectory(trajectory_kind_from_string(cfg.trajectory), cfg.frames, cfg.step, cfg.seed);
    Eigen::Vector3d lo = global_traj.poses.front().center();
    Eigen::Vector3d hi = lo;
    for (const auto& p : global_traj.poses) {
        lo = lo.cwiseMin(p.center());
        hi = hi.cwiseMax(p.center());
    }
    const double traj_diag = (hi - lo).norm();
    const double margin = 0.25 * traj_diag + cfg.step;
    const PointCloud global_cloud = gen_point_cloud(global_traj, cfg.points, margin, cfg.seed + 1);

    save_sfm_text(out / "gt_images.txt", global_traj.poses);
    save_ply(out / "gt_cloud.ply", global_cloud);
    result.stages.push_back({"synth", true, t_synth.seconds(),
                             std::to_string(cfg.frames) + " frames, " +
                                 std::to_string(global_cloud.size()) + " points",
                             {"gt_images.txt", "gt_cloud.ply"}});

    // ---- partition
    StageTimer t_part;
    const PartitionPlan plan =
        plan_multi_flight({cfg.frames}, {cfg.blocks}, cfg.overlap_fraction);
    save_plan(out / "blocks.json", plan);
    result.stages.push_back({"partition", true, t_part.seconds(),
                             std::to_string(plan.blocks.size()) + " blocks",
                             {"blocks.json"}});

    // ---- perturb: per-block local frames with known ground truth
    StageTimer t_pert;
    std::vector<BlockData> blocks;
    std::vector<Sim3> gt;  // applied perturbation per block
    std::vector<std::string> pert_artifacts;
    for (const auto& m : plan.blocks) {
        Trajectory t = slice_by_frames(global_traj, m.frames.first, m.frames.last);
        t.block_id = m.block_id;
        PointCloud c = crop_cloud(global_cloud, t, margin);
        Sim3 g = Sim3::identity();
        if (m.block_id > 0)
            g = random_sim3(cfg.seed + 100 + std::uint64_t(m.block_id), 0.5, 2.0,
                            30.0 * 3.14159265358979323846 / 180.0, 0.5 * bounding_diameter(c));
        PerturbedBlock pb = perturb_block(t, c, g, cfg.point_noise,
                                          cfg.seed + 200 + std::uint64_t(m.block_id));
        pb.trajectory.block_id = m.block_id;

        save_sfm_text(out / block_poses_filename(m.block_id), pb.trajectory.poses);
        save_ply(out / block_cloud_filename(m.block_id), pb.cloud);
        json gj;
        to_json(gj, g);
        write_json_file(out / ("gt_block_" + std::to_string(m.block_id) + ".json"), gj);
        pert_artifacts.push_back(block_poses_filename(m.block_id));
        pert_artifacts.push_back(block_cloud_filename(m.block_id));

        blocks.push_back({m, std::move(pb.trajectory), std::move(pb.cloud)});
        gt.push_back(g);
    }
    result.stages.push_back(
        {"perturb", true, t_pert.seconds(), "per-block transforms applied", pert_artifacts});
    if (!with_align) return result;

    // ---- align: chain every block onto block 0
    StageTimer t_align;
    std::vector<AlignmentReport> pairwise;
    for (std::size_t k = 1; k < blocks.size(); ++k) {
        const OverlapSpec overlap =
            overlap_from_manifests(blocks[k - 1].manifest, blocks[k].manifest);
        pairwise.push_back(align_blocks(blocks[k - 1], blocks[k], overlap, cfg.icp));
    }
    const std::vector<Sim3> chained = chain_transforms(pairwise);

    json align_report = json::array();
    std::vector<std::string> align_artifacts;
    bool all_recovered = true;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        if (k > 0) {  // block 0 is the reference frame; no transform file
            json sj;
            to_json(sj, chained[k]);
            const std::string name =
                "sim3_block_" + std::to_string(blocks[k].manifest.block_id) + ".json";
            write_json_file(out / name, sj);
            align_artifacts.push_back(name);
        }

        // chained[k] * gt[k] should be the identity
        const double diam = bounding_diameter(blocks[k].cloud);
        const Sim3Deviation dev = deviation_from_identity(chained[k] * gt[k]);
        const bool recovered = dev.scale_rel <= 1e-3 &&
                               dev.rotation_rad <= 0.05 * 3.14159265358979323846 / 180.0 &&
                               dev.translation_norm <= 1e-3 * std::max(diam, 1e-12);
        all_recovered = all_recovered && recovered;

        json entry{{"block_id", blocks[k].manifest.block_id},
                   {"recovered", recovered},
                   {"deviation", deviation_json(dev, diam)}};
        if (k > 0) {
            const auto& r = pairwise[k - 1];
            entry["icp_iterations"] = r.icp_iterations;
            entry["coarse_rmse"] = r.coarse_rmse;
            entry["fine_rmse"] = r.fine_rmse;
            entry["correspondences"] = r.correspondences;
        }
        align_report.push_back(entry);
    }
    write_json_file(out / "alignment_report.json", align_report);
    align_artifacts.push_back("alignment_report.json");
    result.stages.push_back({"align", true, t_align.seconds(),
                             all_recovered ? "all blocks recovered within tolerances"
                                           : "recovery outside tolerances; see report",
                             align_artifacts});

    return result;
}

PipelineResult run_real(const PipelineConfig& cfg) {
    PipelineResult result;
    const fs::path out = cfg.out_dir;
    fs::create_directories(out);

    StageTimer t_load;
    const PartitionPlan plan = load_plan(cfg.blocks_file);
    if (plan.blocks.empty()) throw DataError("empty partition plan: " + cfg.blocks_file.string());

    std::vector<BlockData> blocks;
    std::vector<std::string> missing;
    for (const auto& m : plan.blocks) {
        const fs::path poses = cfg.poses_dir / block_poses_filename(m.block_id);
        const fs::path cloud = cfg.clouds_dir / block_cloud_filename(m.block_id);
        if (!fs::exists(poses)) missing.push_back(poses.string());
        if (!fs::exists(cloud)) missing.push_back(cloud.string());
        if (!missing.empty()) continue;
        BlockData b;
        b.manifest = m;
        b.trajectory.poses = load_sfm_text(poses);
        b.trajectory.block_id = m.block_id;
        b.cloud = load_ply(cloud);
        blocks.push_back(std::move(b));
    }
    if (!missing.empty()) {
        std::string msg = "missing external reconstruction outputs; expected:";
        for (const auto& m : missing) msg += "\n  " + m;
        msg += "\nrun the SfM stage per block and export the images text file and sparse cloud";
        throw DataError(msg);
    }
    result.stages.push_back({"load", true, t_load.seconds(),
                             std::to_string(blocks.size()) + " blocks loaded",
                             {}});

    StageTimer t_align;
    std::vector<AlignmentReport> pairwise;
    for (std::size_t k = 1; k < blocks.size(); ++k) {
        if (blocks[k - 1].manifest.flight_id != blocks[k].manifest.flight_id)
            throw DataError(
                "blocks " + std::to_string(blocks[k - 1].manifest.block_id) + " and " +
                std::to_string(blocks[k].manifest.block_id) +
                " span different flights; use the align command with --images to discover the "
                "overlap from image similarity");
        const OverlapSpec overlap =
            overlap_from_manifests(blocks[k - 1].manifest, blocks[k].manifest);
        pairwise.push_back(align_blocks(blocks[k - 1], blocks[k], overlap, cfg.icp));
    }
    const std::vector<Sim3> chained = chain_transforms(pairwise);

    json align_report = json::array();
    std::vector<std::string> artifacts;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        if (k > 0) {
            json sj;
            to_json(sj, chained[k]);
            const std::string name =
                "sim3_block_" + std::to_string(blocks[k].manifest.block_id) + ".json";
            write_json_file(out / name, sj);
            artifacts.push_back(name);
        }
        json entry{{"block_id", blocks[k].manifest.block_id}};
        if (k > 0) {
            const auto& r = pairwise[k - 1];
            entry["icp_iterations"] = r.icp_iterations;
            entry["coarse_rmse"] = r.coarse_rmse;
            entry["fine_rmse"] = r.fine_rmse;
            entry["correspondences"] = r.correspondences;
        }
        align_report.push_back(entry);
    }
    write_json_file(out / "alignment_report.json", align_report);
    artifacts.push_back("alignment_report.json");
    result.stages.push_back({"align", true, t_align.seconds(), "", artifacts});
    return result;
}

}  // namespace

namespace {

PipelineResult finish(const PipelineConfig& config, PipelineResult result) {
    json stages = json::array();
    for (const auto& s : result.stages) {
        json j;
        to_json(j, s);
        // wall-clock time varies run to run; keep the file byte-stable
        j.erase("seconds");
        stages.push_back(j);
    }
    result.report_file = fs::path(config.out_dir) / "report.json";
    write_json_file(result.report_file, stages);
    return result;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    config.validate();
    return finish(config, config.synthetic ? run_synthetic(config, true) : run_real(config));
}

PipelineResult generate_synthetic(const PipelineConfig& config) {
    PipelineConfig cfg = config;
    cfg.synthetic = true;
    cfg.validate();
    return finish(cfg, run_synthetic(cfg, false));
}

}  // namespace panoblock
