// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits with the number of failures.
//
// Usage: acceptance <cli_binary> <source_dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <Eigen/Geometry>

#include "panoblock/align/block_align.hpp"
#include "panoblock/blocksel/select.hpp"
#include "panoblock/blocksel/spline.hpp"
#include "panoblock/features/similarity.hpp"
#include "panoblock/metrics/alignment_metrics.hpp"
#include "panoblock/metrics/image_metrics.hpp"
#include "panoblock/partition/partition.hpp"
#include "panoblock/projection/cubemap.hpp"
#include "panoblock/scene/manifest.hpp"
#include "panoblock/synth/synth.hpp"

namespace fs = std::filesystem;
using namespace panoblock;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(double v, int prec = 3) {
    std::ostringstream os;
    os.precision(prec);
    os << std::fixed << v;
    return os.str();
}

// ------------------------------------------------------- criteria 1 and 2

struct Scene {
    Trajectory global;
    PointCloud cloud;
    double diameter = 0.0;
    BlockData b1, b2;
    Sim3 applied;
    OverlapSpec overlap;
};

Scene make_two_block_scene(unsigned seed, double noise_frac) {
    std::mt19937_64 rng(1000 + seed);
    const int frames = 140 + int(rng() % 6) * 20;
    const int points = 2000 + int(rng() % 8001);

    Scene s;
    s.global = gen_trajectory(TrajectoryKind::lawnmower, frames, 0.1, seed);
    s.cloud = gen_point_cloud(s.global, points, 0.8, seed + 500);
    s.diameter = bounding_diameter(s.cloud);

    const auto blocks = partition_flight(frames, 2, 0.25);
    s.overlap = overlap_from_manifests(blocks[0], blocks[1]);

    s.b1.manifest = blocks[0];
    s.b1.trajectory = slice_by_frames(s.global, blocks[0].frames.first, blocks[0].frames.last);
    s.b1.cloud = overlap_points(s.cloud, s.global, blocks[0].frames);

    s.applied = random_sim3(seed + 9000, 0.5, 2.0, 30.0 * kPi / 180.0, 0.5 * s.diameter);
    const PerturbedBlock pb = perturb_block(
        slice_by_frames(s.global, blocks[1].frames.first, blocks[1].frames.last),
        overlap_points(s.cloud, s.global, blocks[1].frames), s.applied,
        noise_frac * s.diameter, seed + 7000);
    s.b2.manifest = blocks[1];
    s.b2.trajectory = pb.trajectory;
    s.b2.cloud = pb.cloud;
    return s;
}

void criterion_1() {
    Timer t;
    int recovered = 0;
    const int trials = 50;
    std::string first_fail;
    for (unsigned seed = 0; seed < trials; ++seed) {
        const Scene s = make_two_block_scene(seed, 0.0);
        const AlignmentReport r = align_blocks(s.b1, s.b2, s.overlap);
        const Sim3Deviation dev = deviation_from_identity(r.fine * s.applied);
        const bool ok = dev.scale_rel <= 1e-3 && dev.rotation_rad <= 0.05 * kPi / 180.0 &&
                        dev.translation_norm <= 1e-3 * s.diameter;
        if (ok)
            ++recovered;
        else if (first_fail.empty())
            first_fail = "seed " + std::to_string(seed);
    }
    const double sec = t.seconds();
    const bool ok = recovered == trials && sec < 60.0;
    std::string detail = std::to_string(recovered) + "/50 scenes recovered, " + fmt(sec, 1) + " s";
    if (!first_fail.empty()) detail += ", first failure at " + first_fail;
    report(1, "similarity recovery on 50 clean two-block scenes", ok, detail);
}

void criterion_2() {
    Timer t;
    int under_half = 0;
    const int trials = 50;
    double worst = 0.0;
    for (unsigned seed = 0; seed < trials; ++seed) {
        const Scene s = make_two_block_scene(seed, 0.005);
        const AlignmentReport r = align_blocks(s.b1, s.b2, s.overlap);
        const Trajectory est = transformed(s.b2.trajectory, r.fine);
        const Trajectory gt = slice_by_frames(s.global, s.b2.manifest.frames.first,
                                              s.b2.manifest.frames.last);
        const AlignmentError err = alignment_error(est, gt);
        worst = std::max(worst, err.avg_ratio);
        if (err.avg_ratio < 0.5) ++under_half;
    }
    const bool ok = under_half >= 48;  // 95% of 50
    report(2, "avg_ratio below half a frame with noisy points", ok,
           std::to_string(under_half) + "/50 under 0.5, worst ratio " + fmt(worst) + ", " +
               fmt(t.seconds(), 1) + " s");
}

// ------------------------------------------------------------ criterion 3

void criterion_3() {
    Timer t;
    const int w = 5760, h = 2880, fs = 768;
    const std::uint64_t seed = 5;
    const Image8 eq = gen_equirect(EquirectTexture::gabor_band, w, h, seed);
    const CubemapSet cube = equirect_to_cubemap(eq, fs, false, 1);
    const BandImage band = cubemap_to_equirect(cube, w, h, 1);

    // PSNR over the reconstructed band
    double se = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!band.valid[std::size_t(y) * w + x]) continue;
            for (int c = 0; c < 3; ++c) {
                const double d = double(band.image.at(x, y, c)) - double(eq.at(x, y, c));
                se += d * d;
                ++n;
            }
        }
    const double band_psnr = 10.0 * std::log10(255.0 * 255.0 / (se / double(n)));

    // forward map against the continuous texture
    const BandTexture tex = BandTexture::make(seed);
    std::size_t within = 0, total = 0;
    for (int i = 0; i < kSideFaceCount; ++i) {
        const FaceFrame frame = side_face_frame(side_face_yaw(i));
        for (int v = 0; v < fs; ++v)
            for (int u = 0; u < fs; ++u) {
                double theta, phi;
                direction_to_spherical(face_pixel_direction(frame, u, v, fs), theta, phi);
                const double expected = 255.0 * tex.value(theta, phi);
                if (std::abs(double(cube.faces[i].at(u, v)) - expected) <= 1.0) ++within;
                ++total;
            }
    }
    const double pct = 100.0 * double(within) / double(total);
    const double sec = t.seconds();
    const bool ok = band_psnr >= 30.0 && pct >= 99.9 && sec < 30.0;
    report(3, "projection round trip at 5760x2880 with 768px faces", ok,
           "band PSNR " + fmt(band_psnr, 2) + " dB, " + fmt(pct, 3) +
               "% of face pixels within 1 level, " + fmt(sec, 1) + " s");
}

// ------------------------------------------------------------ criterion 4

std::vector<Eigen::Vector3d> random_path_knots(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Eigen::Vector3d> knots;
    Eigen::Vector3d p(0, 0, 0), dir(1, 0, 0);
    for (int i = 0; i < count; ++i) {
        knots.push_back(p);
        dir = (0.7 * dir + 0.3 * Eigen::Vector3d(u(rng), u(rng), u(rng))).normalized();
        p += dir * (0.5 + 0.5 * std::abs(u(rng)));
    }
    return knots;
}

double oracle_spline_distance(const SplinePath& path, const Eigen::Vector3d& p) {
    const double max_u = path.max_param();
    const int samples = 4000;
    double best_u = 0.0, best_d2 = std::numeric_limits<double>::max();
    for (int i = 0; i <= samples; ++i) {
        const double u = max_u * double(i) / double(samples);
        const double d2 = (path.position(u) - p).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best_u = u;
        }
    }
    double lo = std::max(0.0, best_u - max_u / samples);
    double hi = std::min(max_u, best_u + max_u / samples);
    for (int it = 0; it < 100; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if ((path.position(m1) - p).squaredNorm() < (path.position(m2) - p).squaredNorm())
            hi = m2;
        else
            lo = m1;
    }
    return (path.position(0.5 * (lo + hi)) - p).norm();
}

void criterion_4() {
    Timer t;
    int ok_count = 0;
    const int trials = 1000;
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        std::mt19937_64 rng(40000 + i);
        const int knot_count = 4 + int(rng() % 9);
        const auto knots = random_path_knots(rng, knot_count);
        const SplinePath path = SplinePath::fit(knots);

        Eigen::Vector3d lo = knots.front(), hi = lo;
        for (const auto& k : knots) {
            lo = lo.cwiseMin(k);
            hi = hi.cwiseMax(k);
        }
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        Eigen::Vector3d p;
        for (int k = 0; k < 3; ++k)
            p[k] = lo[k] - 1.0 + (hi[k] - lo[k] + 2.0) * u01(rng);

        const double got = distance_to_spline(path, p).distance;
        const double want = oracle_spline_distance(path, p);
        const double err = std::abs(got - want) / path.max_param();
        worst = std::max(worst, err);
        if (err <= 1e-4) ++ok_count;
    }
    const double sec = t.seconds();
    const bool ok = ok_count == trials && sec < 10.0;
    report(4, "spline distance matches the dense oracle on 1000 queries", ok,
           std::to_string(ok_count) + "/1000 within 1e-4 of path length, worst " +
               fmt(worst * 1e4, 2) + "e-4, " + fmt(sec, 1) + " s");
}

// ------------------------------------------------------------ criterion 5

void criterion_5() {
    const int frames = 325, n_blocks = 4;
    const Trajectory global = gen_trajectory(TrajectoryKind::lawnmower, frames, 0.1, 77);
    const auto blocks = partition_flight(frames, n_blocks, 0.25);

    std::vector<SplinePath> paths;
    std::vector<int> ids;
    for (const auto& b : blocks) {
        const Trajectory slice = slice_by_frames(global, b.frames.first, b.frames.last);
        paths.push_back(SplinePath::fit(camera_centers(slice)));
        ids.push_back(b.block_id);
    }

    int wrong_non_overlap = 0, non_monotone = 0;
    std::vector<int> selected(frames);
    for (int f = 0; f < frames; ++f) {
        const BlockSelection sel = select_block(global.poses[f].center(), paths, ids);
        selected[f] = sel.block_id;
        int owners = 0, owner = -1;
        for (const auto& b : blocks)
            if (b.frames.contains(f)) {
                ++owners;
                owner = b.block_id;
            }
        if (owners == 1 && sel.block_id != owner) ++wrong_non_overlap;
        if (f > 0 && selected[f] < selected[f - 1]) ++non_monotone;
    }

    // every switch must land in exactly one overlap region, one switch each
    std::vector<int> switches_per_overlap(n_blocks - 1, 0);
    int stray_switches = 0;
    for (int f = 0; f + 1 < frames; ++f) {
        if (selected[f] == selected[f + 1]) continue;
        bool attributed = false;
        for (int k = 0; k + 1 < n_blocks; ++k) {
            const FrameRange ov = *blocks[k].overlap_next;
            if (ov.contains(f) || ov.contains(f + 1)) {
                ++switches_per_overlap[k];
                attributed = true;
            }
        }
        if (!attributed) ++stray_switches;
    }
    bool one_each = true;
    for (const int c : switches_per_overlap) one_each = one_each && c == 1;

    const bool ok =
        wrong_non_overlap == 0 && non_monotone == 0 && stray_switches == 0 && one_each;
    report(5, "block selection sweep along a 4-block lawnmower path", ok,
           std::to_string(wrong_non_overlap) + " wrong non-overlap picks, " +
               std::to_string(non_monotone) + " monotonicity breaks, switches per overlap " +
               std::to_string(switches_per_overlap[0]) + "/" +
               std::to_string(switches_per_overlap[1]) + "/" +
               std::to_string(switches_per_overlap[2]));
}

// ------------------------------------------------------------ criterion 6

void criterion_6() {
    Timer t;
    const int trials = 20;
    int hits = 0;
    for (int trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(6000 + trial);
        RoomScene room;
        room.seed = std::uint64_t(trial);

        const double step = 0.4;
        const long first_frame = 10, n_candidates = 9;
        std::vector<long> frames;
        std::vector<std::vector<Image8>> candidates;
        for (long f = 0; f < n_candidates; ++f) {
            const Eigen::Vector3d c(0.4, (double(f) - 4.0) * step, -0.3);
            candidates.push_back(render_room_cubemap(
                room, CameraPose::from_c2w(first_frame + f, Eigen::Matrix3d::Identity(), c), 96));
            frames.push_back(first_frame + f);
        }

        const long gt_index = 2 + long(rng() % 5);  // keep away from the ends
        std::uniform_real_distribution<double> off(-0.1, 0.1);
        const Eigen::Vector3d qc(0.4, (double(gt_index) - 4.0) * step + off(rng) * step, -0.3);
        const std::vector<Image8> query = render_room_cubemap(
            room, CameraPose::from_c2w(999, Eigen::Matrix3d::Identity(), qc), 96);

        const SimilarityResult r = most_similar_frame(query, candidates, frames);
        if (std::abs(r.final_frame - (first_frame + gt_index)) <= 1) ++hits;
    }
    const bool ok = hits >= 18;  // 90% of 20
    report(6, "similarity voting finds the overlap frame within one step", ok,
           std::to_string(hits) + "/20 trials within +-1, " + fmt(t.seconds(), 1) + " s");
}

// ------------------------------------------------------------ criterion 7

double reference_psnr(const Image8& a, const Image8& b) {
    double se = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = double(a.data[i]) - double(b.data[i]);
        se += d * d;
    }
    const double mse = se / double(a.data.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

// direct 2D-window implementation, independent of the library's separable one
double reference_ssim(const Image8& a, const Image8& b) {
    const int w = a.width, h = a.height;
    std::vector<double> la(std::size_t(w) * h), lb(la.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = std::size_t(y) * w + x;
            if (a.channels == 1) {
                la[i] = double(a.at(x, y));
                lb[i] = double(b.at(x, y));
            } else {
                la[i] = 0.299 * a.at(x, y, 0) + 0.587 * a.at(x, y, 1) + 0.114 * a.at(x, y, 2);
                lb[i] = 0.299 * b.at(x, y, 0) + 0.587 * b.at(x, y, 1) + 0.114 * b.at(x, y, 2);
            }
        }

    double kernel[11][11];
    double ksum = 0.0;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) {
            const double dy = i - 5, dx = j - 5;
            kernel[i][j] = std::exp(-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5));
            ksum += kernel[i][j];
        }
    for (auto& row : kernel)
        for (auto& v : row) v /= ksum;

    const double c1 = (0.01 * 255) * (0.01 * 255), c2 = (0.03 * 255) * (0.03 * 255);
    double total = 0.0;
    std::size_t count = 0;
    for (int y = 5; y + 5 < h; ++y)
        for (int x = 5; x + 5 < w; ++x) {
            double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
            for (int i = 0; i < 11; ++i)
                for (int j = 0; j < 11; ++j) {
                    const double va = la[std::size_t(y + i - 5) * w + (x + j - 5)];
                    const double vb = lb[std::size_t(y + i - 5) * w + (x + j - 5)];
                    ma += kernel[i][j] * va;
                    mb += kernel[i][j] * vb;
                    saa += kernel[i][j] * va * va;
                    sbb += kernel[i][j] * vb * vb;
                    sab += kernel[i][j] * va * vb;
                }
            const double va = saa - ma * ma, vb = sbb - mb * mb, cab = sab - ma * mb;
            total += ((2 * ma * mb + c1) * (2 * cab + c2)) /
                     ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++count;
        }
    return total / double(count);
}

void criterion_7() {
    bool ok = true;
    std::string detail;

    const Image8 base = []() {
        Image8 im = Image8::create(40, 30, 3);
        for (int y = 0; y < 30; ++y)
            for (int x = 0; x < 40; ++x)
                for (int c = 0; c < 3; ++c)
                    im.at(x, y, c) = std::uint8_t((x * 7 + y * 13 + c * 29) % 256);
        return im;
    }();

    if (!std::isinf(psnr(base, base))) {
        ok = false;
        detail = "identical images not +inf";
    }

    Image8 offset1 = base;
    for (auto& v : offset1.data) v = std::uint8_t(v < 255 ? v + 1 : 254);
    bool all_moved = true;
    for (std::size_t i = 0; i < base.data.size(); ++i)
        all_moved = all_moved && std::abs(int(offset1.data[i]) - int(base.data[i])) == 1;
    const double p1 = psnr(base, offset1);
    if (!all_moved || std::abs(p1 - 48.1308036086791) > 1e-9 ||
        std::abs(p1 - 20.0 * std::log10(255.0)) > 1e-9) {
        ok = false;
        detail = "unit-offset PSNR " + fmt(p1, 10);
    }

    if (ssim(base, base) != 1.0) {
        ok = false;
        detail = "ssim(a,a) != 1";
    }

    double worst_p = 0.0, worst_s = 0.0;
    for (int pair = 0; pair < 20; ++pair) {
        std::mt19937_64 rng(7000 + pair);
        const int ch = pair % 2 ? 3 : 1;
        Image8 a = Image8::create(40, 30, ch), b = a;
        for (auto& v : a.data) v = std::uint8_t(rng() % 256);
        for (auto& v : b.data) v = std::uint8_t(rng() % 256);
        worst_p = std::max(worst_p, std::abs(psnr(a, b) - reference_psnr(a, b)));
        worst_s = std::max(worst_s, std::abs(ssim(a, b) - reference_ssim(a, b)));
    }
    if (worst_p > 1e-9 || worst_s > 1e-9) {
        ok = false;
        detail = "reference gap psnr " + fmt(worst_p, 12) + " ssim " + fmt(worst_s, 12);
    }
    if (ok)
        detail = "closed forms exact, 20 random pairs within 1e-9 of the reference";
    report(7, "image metric correctness", ok, detail);
}

// ------------------------------------------------------------ criterion 8

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

bool run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

bool check_plan(const fs::path& file, int flights, int blocks_per_flight,
                const std::vector<int>& frame_counts, std::string& problem) {
    const PartitionPlan plan = load_plan(file);
    if (int(plan.blocks.size()) != flights * blocks_per_flight) {
        problem = "wrong block count in " + file.filename().string();
        return false;
    }
    for (int fl = 0; fl < flights; ++fl) {
        std::vector<BlockManifest> mine;
        for (const auto& b : plan.blocks)
            if (b.flight_id == fl) mine.push_back(b);
        if (int(mine.size()) != blocks_per_flight) {
            problem = "flight " + std::to_string(fl) + " has wrong block count";
            return false;
        }
        const long len = mine.front().frames.length();
        std::vector<bool> covered(frame_counts[fl], false);
        for (const auto& b : mine) {
            if (b.frames.length() != len) {
                problem = "unequal block lengths";
                return false;
            }
            for (long f = b.frames.first; f <= b.frames.last; ++f) {
                if (f < 0 || f >= frame_counts[fl]) {
                    problem = "frame out of range";
                    return false;
                }
                covered[std::size_t(f)] = true;
            }
        }
        for (const bool c : covered)
            if (!c) {
                problem = "coverage gap";
                return false;
            }
        const long min_overlap = long(0.25 * double(len));
        for (std::size_t i = 1; i < mine.size(); ++i) {
            const auto shared = intersect(mine[i - 1].frames, mine[i].frames);
            if (!shared || shared->length() < min_overlap) {
                problem = "overlap below floor(0.25 L)";
                return false;
            }
        }
    }
    return true;
}

void criterion_8(const std::string& cli) {
    const fs::path tmp = fs::temp_directory_path() / "panoblock_acceptance";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    struct Proto {
        std::string name, args;
        int flights, blocks_per_flight;
        std::vector<int> frame_counts;
    };
    const std::vector<Proto> protos = {
        {"1s1b", "--frames 175 --flights 1 --blocks 1", 1, 1, {175}},
        {"1s4b", "--frames 325 --flights 1 --blocks 4", 1, 4, {325}},
        {"4s4b", "--frames 150 --flights 4 --blocks 4", 4, 1, {150, 150, 150, 150}},
        {"3s3b", "--frames 150 --flights 3 --blocks 3", 3, 1, {150, 150, 150}},
    };

    bool ok = true;
    std::string problem;
    for (const auto& p : protos) {
        const fs::path out = tmp / (p.name + ".json");
        if (!run_cli(cli, "partition " + p.args + " --out " + out.string())) {
            ok = false;
            problem = p.name + " invocation failed";
            break;
        }
        if (!check_plan(out, p.flights, p.blocks_per_flight, p.frame_counts, problem)) {
            ok = false;
            break;
        }
        const fs::path again = tmp / (p.name + "_again.json");
        if (!run_cli(cli, "partition " + p.args + " --out " + again.string()) ||
            slurp(out) != slurp(again)) {
            ok = false;
            problem = p.name + " rerun not byte-identical";
            break;
        }
    }
    fs::remove_all(tmp);
    report(8, "partition protocols 1S1B, 1S4B, 4S4B, 3S3B via the command line", ok,
           ok ? "all four plans valid and byte-stable" : problem);
}

// ------------------------------------------------------------ criterion 9

void criterion_9(const fs::path& source_dir) {
    const fs::path readme = source_dir / "README.md";
    std::string text = slurp(readme);
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    const bool ok = !text.empty() && text.find("gpu") != std::string::npos &&
                    text.find("out of scope") != std::string::npos &&
                    text.find("training") != std::string::npos;
    report(9, "scope statement for externally trained splat metrics", ok,
           ok ? "README states the GPU-training results are out of scope"
              : "README missing the scope statement");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <cli_binary> <source_dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path source_dir = argv[2];

    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criterion_8(cli);
        criterion_9(source_dir);
    } catch (const std::exception& e) {
        std::cerr << "acceptance aborted: " << e.what() << "\n";
        return 99;
    }

    if (g_failures == 0)
        std::cout << "ALL CRITERIA PASSED" << std::endl;
    else
        std::cout << "FAILED CRITERIA: " << g_failures << std::endl;
    return g_failures;
}
