#include "panoblock/io/colmap.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "panoblock/error.hpp"

namespace panoblock {

long frame_index_from_name(const std::string& name) {
    std::string base = std::filesystem::path(name).filename().string();
    const auto dot = base.find_last_of('.');
    if (dot != std::string::npos) base = base.substr(0, dot);

    auto end = base.find_last_of("0123456789");
    if (end == std::string::npos) {
        throw DataError("image name '" + name + "' carries no numeric frame suffix");
    }
    auto begin = end;
    while (begin > 0 && std::isdigit(static_cast<unsigned char>(base[begin - 1]))) --begin;
    return std::stol(base.substr(begin, end - begin + 1));
}

std::vector<CameraPose> parse_sfm_text(std::istream& in) {
    std::vector<CameraPose> poses;
    std::string line;
    long line_number = 0;
    bool expect_points_line = false;

    while (std::getline(in, line)) {
        ++line_number;
        if (expect_points_line) {
            // Per-image 2D observations, skipped (may be empty).
            expect_points_line = false;
            continue;
        }
        if (line.empty() || line[0] == '#') continue;

        std::istringstream fields(line);
        long image_id;
        double qw, qx, qy, qz, tx, ty, tz;
        long camera_id;
        std::string name;
        if (!(fields >> image_id >> qw >> qx >> qy >> qz >> tx >> ty >> tz >> camera_id >> name)) {
            throw DataError("images text line " + std::to_string(line_number) +
                            ": malformed image record");
        }

        const double norm = std::sqrt(qw * qw + qx * qx + qy * qy + qz * qz);
        if (norm < 1e-12) {
            throw DataError("images text line " + std::to_string(line_number) +
                            ": quaternion not normalizable");
        }

        CameraPose pose;
        pose.frame_id = frame_index_from_name(name);
        pose.q = Eigen::Quaterniond(qw / norm, qx / norm, qy / norm, qz / norm);
        pose.t = Eigen::Vector3d(tx, ty, tz);
        poses.push_back(pose);
        expect_points_line = true;
    }

    std::sort(poses.begin(), poses.end(),
              [](const CameraPose& a, const CameraPose& b) { return a.frame_id < b.frame_id; });
    return poses;
}

std::vector<CameraPose> load_sfm_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return parse_sfm_text(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_sfm_text(std::ostream& out, const std::vector<CameraPose>& poses) {
    out << "# Image list with two lines of data per image:\n"
        << "#   IMAGE_ID, QW, QX, QY, QZ, TX, TY, TZ, CAMERA_ID, NAME\n"
        << "#   POINTS2D[] as (X, Y, POINT3D_ID)\n";
    out << std::setprecision(17);
    long image_id = 1;
    for (const CameraPose& p : poses) {
        std::ostringstream name;
        name << "frame_" << std::setw(6) << std::setfill('0') << p.frame_id << ".png";
        out << image_id++ << " " << p.q.w() << " " << p.q.x() << " " << p.q.y() << " " << p.q.z()
            << " " << p.t.x() << " " << p.t.y() << " " << p.t.z() << " 1 " << name.str() << "\n"
            << "\n";
    }
}

void save_sfm_text(const std::filesystem::path& path, const std::vector<CameraPose>& poses) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_sfm_text(out, poses);
}

}  // namespace panoblock
