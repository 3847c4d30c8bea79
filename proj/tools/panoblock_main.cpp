#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "panoblock/align/block_align.hpp"
#include "panoblock/blocksel/select.hpp"
#include "panoblock/error.hpp"
#include "panoblock/features/similarity.hpp"
#include "panoblock/image/png_io.hpp"
#include "panoblock/io/colmap.hpp"
#include "panoblock/io/ply.hpp"
#include "panoblock/mask/mask_ops.hpp"
#include "panoblock/metrics/alignment_metrics.hpp"
#include "panoblock/metrics/image_metrics.hpp"
#include "panoblock/parallel.hpp"
#include "panoblock/partition/partition.hpp"
#include "panoblock/pipeline/pipeline.hpp"
#include "panoblock/projection/cubemap.hpp"
#include "panoblock/synth/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace panoblock;

namespace {

std::vector<fs::path> png_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
}

void emit_json(const json& j, const std::string& out_file) {
    if (out_file.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_file);
        if (!out) throw IoError("cannot write " + out_file);
        out << j.dump(2) << "\n";
    }
}

// ---------------------------------------------------------------- project

struct ProjectArgs {
    std::string in_dir, out_dir;
    int face_size = 768;
    bool with_poles = false;
};

void run_project(const ProjectArgs& a, int jobs) {
    fs::create_directories(a.out_dir);
    const auto files = png_files(a.in_dir);
    if (files.empty()) throw DataError("no .png frames in " + a.in_dir);
    for (const auto& f : files) {
        const Image8 frame = read_png(f.string());
        const CubemapSet cube = equirect_to_cubemap(frame, a.face_size, a.with_poles, jobs);
        for (std::size_t i = 0; i < cube.faces.size(); ++i) {
            const fs::path out =
                fs::path(a.out_dir) / (f.stem().string() + "_" + cube.names[i] + ".png");
            write_png(out.string(), cube.faces[i]);
        }
        std::cout << f.filename().string() << " -> " << cube.faces.size() << " faces\n";
    }
}

// ------------------------------------------------------------------- mask

struct MaskArgs {
    std::string masks_dir, out_dir, images_dir;
    int dilate_radius = 5;
    std::vector<std::string> ellipses;
    bool fill = false;
};

BinaryMask parse_ellipses_onto(BinaryMask mask, const std::vector<std::string>& specs) {
    for (const auto& spec : specs) {
        std::istringstream ss(spec);
        double cx, cy, a, b, angle = 0.0;
        char comma;
        if (!(ss >> cx >> comma >> cy >> comma >> a >> comma >> b))
            throw ArgumentError("bad --ellipse spec (want cx,cy,a,b[,angle]): " + spec);
        if (ss >> comma) ss >> angle;
        mask = mask_union(mask, ellipse_mask(mask.width, mask.height, cx, cy, a, b, angle));
    }
    return mask;
}

void run_mask(const MaskArgs& a, int jobs) {
    (void)jobs;
    fs::create_directories(a.out_dir);
    const auto files = png_files(a.masks_dir);
    if (files.empty()) throw DataError("no .png masks in " + a.masks_dir);
    for (const auto& f : files) {
        BinaryMask mask = mask_from_image(read_png(f.string()));
        mask = parse_ellipses_onto(std::move(mask), a.ellipses);
        mask = dilate(mask, a.dilate_radius);
        if (a.fill) {
            if (a.images_dir.empty())
                throw ArgumentError("--fill needs --images with the frames to fill");
            const fs::path img_path = fs::path(a.images_dir) / f.filename();
            if (!fs::exists(img_path))
                throw DataError("no matching frame for mask " + f.filename().string() + " at " +
                                img_path.string());
            const Image8 filled = fill_masked(read_png(img_path.string()), mask);
            write_png((fs::path(a.out_dir) / f.filename()).string(), filled);
        } else {
            write_png((fs::path(a.out_dir) / f.filename()).string(), mask_to_image(mask));
        }
    }
}

// -------------------------------------------------------------- partition

struct PartitionArgs {
    std::vector<int> frames;
    int flights = 1;
    int blocks = 1;
    double overlap = 0.25;
    std::string out_file = "blocks.json";
};

void run_partition(const PartitionArgs& a) {
    if (a.flights < 1) throw ArgumentError("--flights must be at least 1");
    if (a.blocks % a.flights != 0)
        throw ArgumentError("--blocks must be divisible by --flights");
    std::vector<int> counts = a.frames;
    if (int(counts.size()) == 1 && a.flights > 1) counts.assign(a.flights, counts[0]);
    if (int(counts.size()) != a.flights)
        throw ArgumentError("--frames needs one value per flight (or a single shared value)");
    const std::vector<int> per_flight(a.flights, a.blocks / a.flights);
    const PartitionPlan plan = plan_multi_flight(counts, per_flight, a.overlap);
    save_plan(a.out_file, plan);
    std::cout << "wrote " << a.out_file << " with " << plan.blocks.size() << " blocks\n";
}

// ------------------------------------------------------------- similarity

struct SimilarityArgs {
    std::string query_prefix, candidates_dir, out_file;
    int faces = 8;
    double temperature = 1.0;
};

std::vector<Image8> load_query_faces(const std::string& prefix, int n_faces) {
    std::vector<Image8> faces;
    for (int i = 0; i < n_faces; ++i) {
        const std::string path = prefix + "_" + kSideFaceNames[i] + ".png";
        if (!fs::exists(path)) throw DataError("missing query face image: " + path);
        faces.push_back(read_png(path));
    }
    return faces;
}

void run_similarity(const SimilarityArgs& a) {
    if (a.faces < 1 || a.faces > kSideFaceCount)
        throw ArgumentError("--faces must be between 1 and 8");

    // group candidate files as <frame>_<face>.png
    std::map<long, std::map<std::string, fs::path>> by_frame;
    for (const auto& f : png_files(a.candidates_dir)) {
        const std::string stem = f.stem().string();
        const auto us = stem.rfind('_');
        if (us == std::string::npos) continue;
        const std::string face = stem.substr(us + 1);
        bool known = false;
        for (int i = 0; i < a.faces; ++i) known = known || face == kSideFaceNames[i];
        if (!known) continue;
        by_frame[frame_index_from_name(stem.substr(0, us))][face] = f;
    }

    std::vector<long> frames;
    std::vector<std::vector<Image8>> candidates;
    for (const auto& [frame, faces] : by_frame) {
        if (int(faces.size()) != a.faces) continue;  // incomplete frame
        std::vector<Image8> imgs;
        for (int i = 0; i < a.faces; ++i) imgs.push_back(read_png(faces.at(kSideFaceNames[i]).string()));
        frames.push_back(frame);
        candidates.push_back(std::move(imgs));
    }
    if (candidates.size() < 3)
        throw DataError("need at least 3 complete candidate frames in " + a.candidates_dir);

    const auto query = load_query_faces(a.query_prefix, a.faces);
    const SimilarityResult result =
        most_similar_frame(query, candidates, frames, a.temperature);
    json j;
    to_json(j, result);
    emit_json(j, a.out_file);
}

// ------------------------------------------------------------------ align

struct AlignArgs {
    std::string blocks_file, poses_dir, clouds_dir, out_dir, images_dir;
    std::string mode = "auto";  // auto | manifest | similarity
    double keep = 0.9;
    int max_iters = 50;
    double tol = 1e-6;
    int min_matches = 15;
    double temperature = 1.0;
    int faces = 8;
};

std::vector<BlockData> load_blocks(const std::string& blocks_file, const std::string& poses_dir,
                                   const std::string& clouds_dir) {
    const PartitionPlan plan = load_plan(blocks_file);
    if (plan.blocks.empty()) throw DataError("empty partition plan: " + blocks_file);
    std::vector<std::string> missing;
    std::vector<BlockData> blocks;
    for (const auto& m : plan.blocks) {
        const fs::path poses = fs::path(poses_dir) / block_poses_filename(m.block_id);
        const fs::path cloud = fs::path(clouds_dir) / block_cloud_filename(m.block_id);
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
        std::string msg = "missing per-block reconstruction outputs; expected:";
        for (const auto& m : missing) msg += "\n  " + m;
        msg += "\nexport each block's SfM images text file and sparse cloud first";
        throw DataError(msg);
    }
    return blocks;
}

OverlapSpec similarity_overlap(const AlignArgs& a, const BlockData& b1, const BlockData& b2) {
    if (a.images_dir.empty())
        throw ArgumentError("cross-flight alignment needs --images with per-frame face images");

    auto face_prefix = [&](long frame) {
        std::ostringstream name;
        name << std::setw(6) << std::setfill('0') << frame;
        return (fs::path(a.images_dir) / name.str()).string();
    };

    std::vector<long> frames;
    std::vector<std::vector<Image8>> candidates;
    for (const auto& p : b1.trajectory.poses) {
        const std::string prefix = face_prefix(p.frame_id);
        if (!fs::exists(prefix + "_front.png")) continue;
        candidates.push_back(load_query_faces(prefix, a.faces));
        frames.push_back(p.frame_id);
    }
    if (candidates.size() < 3)
        throw DataError("fewer than 3 candidate frames of block " +
                        std::to_string(b1.manifest.block_id) + " have face images in " +
                        a.images_dir);

    const long query_frame = b2.trajectory.poses.front().frame_id;
    const auto query = load_query_faces(face_prefix(query_frame), a.faces);
    const SimilarityResult sim = most_similar_frame(query, candidates, frames, a.temperature);
    if (sim.median_best_count < a.min_matches)
        throw DataError("no overlap found between blocks " +
                        std::to_string(b1.manifest.block_id) + " and " +
                        std::to_string(b2.manifest.block_id) + ": best match count " +
                        std::to_string(sim.median_best_count) + " is below the threshold " +
                        std::to_string(a.min_matches));

    const long overlap_frames = b1.manifest.frames.last - sim.final_frame + 1;
    return overlap_from_similarity(b1.manifest, b2.manifest, sim.final_frame, overlap_frames);
}

void run_align(const AlignArgs& a) {
    fs::create_directories(a.out_dir);
    auto blocks = load_blocks(a.blocks_file, a.poses_dir, a.clouds_dir);

    IcpParams params;
    params.keep_fraction = a.keep;
    params.max_iterations = a.max_iters;
    params.rel_tolerance = a.tol;

    std::vector<AlignmentReport> pairwise;
    std::vector<OverlapSource> sources;
    for (std::size_t k = 1; k < blocks.size(); ++k) {
        const bool same_flight =
            blocks[k - 1].manifest.flight_id == blocks[k].manifest.flight_id;
        OverlapSpec overlap;
        if (a.mode == "manifest" || (a.mode == "auto" && same_flight))
            overlap = overlap_from_manifests(blocks[k - 1].manifest, blocks[k].manifest);
        else
            overlap = similarity_overlap(a, blocks[k - 1], blocks[k]);
        sources.push_back(overlap.source);
        pairwise.push_back(align_blocks(blocks[k - 1], blocks[k], overlap, params));
    }
    const std::vector<Sim3> chained = chain_transforms(pairwise);

    json report = json::array();
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        if (k > 0) {  // the first block is the reference frame and keeps identity
            json sj;
            to_json(sj, chained[k]);
            const fs::path file =
                fs::path(a.out_dir) /
                ("sim3_block_" + std::to_string(blocks[k].manifest.block_id) + ".json");
            std::ofstream out(file);
            out << sj.dump(2) << "\n";
        }
        json entry{{"block_id", blocks[k].manifest.block_id}};
        if (k > 0) {
            const auto& r = pairwise[k - 1];
            entry["overlap_source"] =
                sources[k - 1] == OverlapSource::manifest ? "manifest" : "similarity";
            entry["icp_iterations"] = r.icp_iterations;
            entry["coarse_rmse"] = r.coarse_rmse;
            entry["fine_rmse"] = r.fine_rmse;
            entry["correspondences"] = r.correspondences;
        }
        report.push_back(entry);
    }
    emit_json(report, (fs::path(a.out_dir) / "alignment_report.json").string());
    std::cout << "aligned " << blocks.size() << " blocks -> " << a.out_dir << "\n";
}

// ----------------------------------------------------------------- select

struct SelectArgs {
    std::string blocks_file, poses_dir, transforms_dir, pos, batch_file, out_file;
};

Eigen::Vector3d parse_xyz(const std::string& s) {
    std::istringstream ss(s);
    double x, y, z;
    char c1, c2;
    if (!(ss >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',')
        throw ArgumentError("bad position (want x,y,z): " + s);
    return {x, y, z};
}

void run_select(const SelectArgs& a) {
    const PartitionPlan plan = load_plan(a.blocks_file);
    std::vector<SplinePath> paths;
    std::vector<int> ids;
    for (const auto& m : plan.blocks) {
        const fs::path poses = fs::path(a.poses_dir) / block_poses_filename(m.block_id);
        if (!fs::exists(poses))
            throw DataError("missing poses for block " + std::to_string(m.block_id) + ": " +
                            poses.string());
        Trajectory traj;
        traj.poses = load_sfm_text(poses);
        Sim3 g;  // blocks without a transform file stay in their own frame (identity)
        if (!a.transforms_dir.empty()) {
            const fs::path tf = fs::path(a.transforms_dir) /
                                ("sim3_block_" + std::to_string(m.block_id) + ".json");
            if (fs::exists(tf)) {
                std::ifstream in(tf);
                json j;
                in >> j;
                from_json(j, g);
            }
        }
        const Trajectory aligned = transformed(traj, g);
        paths.push_back(SplinePath::fit(camera_centers(aligned)));
        ids.push_back(m.block_id);
    }

    auto select_one = [&](const Eigen::Vector3d& p) {
        const BlockSelection sel = select_block(p, paths, ids);
        return json{{"block_id", sel.block_id},
                    {"distance", sel.distance},
                    {"u", sel.u},
                    {"distances", sel.distances}};
    };

    if (!a.batch_file.empty()) {
        std::ifstream in(a.batch_file);
        if (!in) throw IoError("cannot open batch file: " + a.batch_file);
        std::ostringstream lines;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ss(line);
            double x, y, z;
            if (!(ss >> x >> y >> z)) throw DataError("bad batch line: " + line);
            lines << select_one({x, y, z}).dump() << "\n";
        }
        if (a.out_file.empty()) {
            std::cout << lines.str();
        } else {
            std::ofstream out(a.out_file);
            out << lines.str();
        }
    } else {
        if (a.pos.empty()) throw ArgumentError("give --pos x,y,z or --batch file");
        emit_json(select_one(parse_xyz(a.pos)), a.out_file);
    }
}

// ------------------------------------------------------------------- eval

struct EvalArgs {
    std::string metric;  // psnr | ssim | align
    std::string a_path, b_path, est_file, gt_file, out_file;
    bool per_channel = false;
};

void run_eval(const EvalArgs& a) {
    if (a.metric == "align") {
        Trajectory est, gt;
        est.poses = load_sfm_text(a.est_file);
        gt.poses = load_sfm_text(a.gt_file);
        const AlignmentError err = alignment_error(est, gt);
        emit_json(json{{"rmse", err.rmse},
                       {"avg_step", err.avg_step},
                       {"avg_ratio", err.avg_ratio},
                       {"per_frame", err.per_frame}},
                  a.out_file);
        return;
    }

    std::vector<std::pair<fs::path, fs::path>> pairs;
    if (fs::is_directory(a.a_path)) {
        for (const auto& f : png_files(a.a_path)) {
            const fs::path other = fs::path(a.b_path) / f.filename();
            if (!fs::exists(other))
                throw DataError("no counterpart for " + f.filename().string() + " in " +
                                a.b_path);
            pairs.emplace_back(f, other);
        }
        if (pairs.empty()) throw DataError("no .png files in " + a.a_path);
    } else {
        pairs.emplace_back(a.a_path, a.b_path);
    }

    json items = json::array();
    double sum = 0.0;
    for (const auto& [pa, pb] : pairs) {
        const Image8 ia = read_png(pa.string());
        const Image8 ib = read_png(pb.string());
        json item{{"a", pa.string()}, {"b", pb.string()}};
        double v;
        if (a.metric == "psnr") {
            v = psnr(ia, ib);
            item["psnr"] = v;
            if (a.per_channel) item["psnr_per_channel"] = psnr_per_channel(ia, ib);
        } else {
            v = ssim(ia, ib);
            item["ssim"] = v;
        }
        sum += v;
        items.push_back(item);
    }
    emit_json(json{{"mean", sum / double(pairs.size())}, {"items", items}}, a.out_file);
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
    std::string kind = "lawnmower";
    int frames = 400;
    double step = 0.1;
    std::uint64_t seed = 7;
    int blocks = 1;
    int points = 4000;
    double noise = 0.0;
    double overlap = 0.25;
    std::string out_dir;
};

void run_synth(const SynthArgs& a, int jobs) {
    PipelineConfig cfg;
    cfg.synthetic = true;
    cfg.trajectory = a.kind;
    cfg.frames = a.frames;
    cfg.blocks = a.blocks;
    cfg.step = a.step;
    cfg.points = a.points;
    cfg.point_noise = a.noise;
    cfg.seed = a.seed;
    cfg.overlap_fraction = a.overlap;
    cfg.out_dir = a.out_dir;
    cfg.jobs = jobs;
    const PipelineResult res = generate_synthetic(cfg);
    for (const auto& s : res.stages)
        std::cout << s.name << ": " << s.message << "\n";
}

// -------------------------------------------------------------------- run

struct RunArgs {
    std::string config_file;
    bool synthetic = false;
    std::optional<int> blocks, frames, points;
    std::optional<double> overlap, step, noise;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

void run_run(const RunArgs& a, int jobs) {
    PipelineConfig cfg;
    if (!a.config_file.empty()) cfg = load_config(a.config_file);
    if (a.synthetic) cfg.synthetic = true;
    if (a.blocks) cfg.blocks = *a.blocks;
    if (a.frames) cfg.frames = *a.frames;
    if (a.points) cfg.points = *a.points;
    if (a.overlap) cfg.overlap_fraction = *a.overlap;
    if (a.step) cfg.step = *a.step;
    if (a.noise) cfg.point_noise = *a.noise;
    if (a.seed) cfg.seed = *a.seed;
    if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;
    if (jobs > 0) cfg.jobs = jobs;

    const PipelineResult res = run_pipeline(cfg);
    for (const auto& s : res.stages)
        std::cout << s.name << (s.ok ? " ok" : " FAILED") << " (" << s.message << ")\n";
    std::cout << "report: " << res.report_file.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-block indoor scene pipeline"};
    app.require_subcommand(1);
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker threads (0 = hardware)")->capture_default_str();

    ProjectArgs project_args;
    auto* project = app.add_subcommand("project", "equirect frames to cube faces");
    project->add_option("--in", project_args.in_dir, "directory of equirect .png frames")
        ->required();
    project->add_option("--out", project_args.out_dir, "output directory")->required();
    project->add_option("--face-size", project_args.face_size, "face edge in pixels")
        ->capture_default_str();
    project->add_flag("--with-poles", project_args.with_poles, "emit top/bottom faces too");

    MaskArgs mask_args;
    auto* mask = app.add_subcommand("mask", "dilate/compose drone masks, optionally fill");
    mask->add_option("--masks", mask_args.masks_dir, "directory of mask .png files")->required();
    mask->add_option("--out", mask_args.out_dir, "output directory")->required();
    mask->add_option("--dilate", mask_args.dilate_radius, "dilation radius in pixels")
        ->capture_default_str();
    mask->add_option("--ellipse", mask_args.ellipses,
                     "extra ellipse mask cx,cy,a,b[,angle]; repeatable");
    mask->add_flag("--fill", mask_args.fill, "fill masked pixels of matching frames");
    mask->add_option("--images", mask_args.images_dir, "frames to fill (with --fill)");

    PartitionArgs part_args;
    auto* part = app.add_subcommand("partition", "split flights into overlapping blocks");
    part->add_option("--frames", part_args.frames, "frame count (one per flight or shared)")
        ->required();
    part->add_option("--flights", part_args.flights, "flight count")->capture_default_str();
    part->add_option("--blocks", part_args.blocks, "total block count")->required();
    part->add_option("--overlap", part_args.overlap, "overlap fraction")->capture_default_str();
    part->add_option("--out", part_args.out_file, "output blocks.json")->capture_default_str();

    SimilarityArgs sim_args;
    auto* sim = app.add_subcommand("similarity", "find the most similar candidate frame");
    sim->add_option("--query", sim_args.query_prefix, "path prefix of the query's face images")
        ->required();
    sim->add_option("--candidates", sim_args.candidates_dir,
                    "directory of candidate <frame>_<face>.png images")
        ->required();
    sim->add_option("--faces", sim_args.faces, "face count to use")->capture_default_str();
    sim->add_option("--temperature", sim_args.temperature, "softmax temperature")
        ->capture_default_str();
    sim->add_option("--out", sim_args.out_file, "write the result JSON here (default stdout)");

    AlignArgs align_args;
    auto* align = app.add_subcommand("align", "coarse-to-fine block alignment");
    align->add_option("--blocks", align_args.blocks_file, "blocks.json")->required();
    align->add_option("--poses", align_args.poses_dir, "directory of block_<id>_images.txt")
        ->required();
    align->add_option("--clouds", align_args.clouds_dir, "directory of block_<id>.ply")
        ->required();
    align->add_option("--out", align_args.out_dir, "output directory")->required();
    align->add_option("--mode", align_args.mode, "auto | manifest | similarity")
        ->capture_default_str();
    align->add_option("--images", align_args.images_dir,
                      "per-frame face images for cross-flight overlap discovery");
    align->add_option("--keep", align_args.keep, "ICP trimming keep fraction")
        ->capture_default_str();
    align->add_option("--max-iters", align_args.max_iters, "ICP iteration cap")
        ->capture_default_str();
    align->add_option("--tol", align_args.tol, "ICP relative RMSE tolerance")
        ->capture_default_str();
    align->add_option("--min-matches", align_args.min_matches,
                      "overlap-detection match-count threshold")
        ->capture_default_str();
    align->add_option("--temperature", align_args.temperature, "similarity softmax temperature")
        ->capture_default_str();

    SelectArgs select_args;
    auto* select = app.add_subcommand("select", "pick the block nearest a viewer position");
    select->add_option("--blocks", select_args.blocks_file, "blocks.json")->required();
    select->add_option("--poses", select_args.poses_dir, "directory of block_<id>_images.txt")
        ->required();
    select->add_option("--transforms", select_args.transforms_dir,
                       "directory of sim3_block_<id>.json (default: identity)");
    select->add_option("--pos", select_args.pos, "query position x,y,z");
    select->add_option("--batch", select_args.batch_file, "file of 'x y z' lines");
    select->add_option("--out", select_args.out_file, "output file (default stdout)");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "quality metrics");
    eval->add_option("metric", eval_args.metric, "psnr | ssim | align")->required();
    eval->add_option("--a", eval_args.a_path, "first image or directory");
    eval->add_option("--b", eval_args.b_path, "second image or directory");
    eval->add_option("--est", eval_args.est_file, "estimated poses (align)");
    eval->add_option("--gt", eval_args.gt_file, "ground-truth poses (align)");
    eval->add_flag("--per-channel", eval_args.per_channel, "also report per-channel PSNR");
    eval->add_option("--out", eval_args.out_file, "output file (default stdout)");

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate a synthetic scene with ground truth");
    synth->add_option("--kind", synth_args.kind, "line | loop | lawnmower | stacked-loops")
        ->capture_default_str();
    synth->add_option("--frames", synth_args.frames, "frame count")->capture_default_str();
    synth->add_option("--step", synth_args.step, "distance between frames")
        ->capture_default_str();
    synth->add_option("--seed", synth_args.seed, "RNG seed")->capture_default_str();
    synth->add_option("--blocks", synth_args.blocks, "block count")->capture_default_str();
    synth->add_option("--points", synth_args.points, "cloud size")->capture_default_str();
    synth->add_option("--noise", synth_args.noise, "point noise sigma")->capture_default_str();
    synth->add_option("--overlap", synth_args.overlap, "overlap fraction")
        ->capture_default_str();
    synth->add_option("--out", synth_args.out_dir, "output directory")->required();

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "run the pipeline end to end");
    run->add_option("--config", run_args.config_file, "JSON config file");
    run->add_flag("--synthetic", run_args.synthetic, "synthetic end-to-end mode");
    run->add_option("--blocks", run_args.blocks, "block count override");
    run->add_option("--frames", run_args.frames, "frame count override");
    run->add_option("--points", run_args.points, "cloud size override");
    run->add_option("--overlap", run_args.overlap, "overlap fraction override");
    run->add_option("--step", run_args.step, "step override");
    run->add_option("--noise", run_args.noise, "point noise override");
    run->add_option("--seed", run_args.seed, "seed override");
    run->add_option("--out", run_args.out_dir, "output directory override");

    try {
        app.parse(argc, argv);
        if (project->parsed()) run_project(project_args, jobs);
        if (mask->parsed()) run_mask(mask_args, jobs);
        if (part->parsed()) run_partition(part_args);
        if (sim->parsed()) run_similarity(sim_args);
        if (align->parsed()) run_align(align_args);
        if (select->parsed()) run_select(select_args);
        if (eval->parsed()) run_eval(eval_args);
        if (synth->parsed()) run_synth(synth_args, jobs);
        if (run->parsed()) run_run(run_args, jobs);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
