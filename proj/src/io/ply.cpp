#include "panoblock/io/ply.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "panoblock/error.hpp"

namespace panoblock {

namespace {

enum class PlyType { char8, uchar8, short16, ushort16, int32, uint32, float32, float64 };

std::size_t type_size(PlyType t) {
    switch (t) {
        case PlyType::char8:
        case PlyType::uchar8: return 1;
        case PlyType::short16:
        case PlyType::ushort16: return 2;
        case PlyType::int32:
        case PlyType::uint32:
        case PlyType::float32: return 4;
        case PlyType::float64: return 8;
    }
    return 0;
}

PlyType parse_type(const std::string& name) {
    static const std::map<std::string, PlyType> table = {
        {"char", PlyType::char8},     {"int8", PlyType::char8},
        {"uchar", PlyType::uchar8},   {"uint8", PlyType::uchar8},
        {"short", PlyType::short16},  {"int16", PlyType::short16},
        {"ushort", PlyType::ushort16},{"uint16", PlyType::ushort16},
        {"int", PlyType::int32},      {"int32", PlyType::int32},
        {"uint", PlyType::uint32},    {"uint32", PlyType::uint32},
        {"float", PlyType::float32},  {"float32", PlyType::float32},
        {"double", PlyType::float64}, {"float64", PlyType::float64},
    };
    auto it = table.find(name);
    if (it == table.end()) throw DataError("ply: unknown property type '" + name + "'");
    return it->second;
}

struct PlyProperty {
    std::string name;
    PlyType type = PlyType::float32;
    bool is_list = false;
    PlyType count_type = PlyType::uchar8;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

struct PlyHeader {
    bool binary = false;
    std::vector<PlyElement> elements;
};

PlyHeader parse_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("ply: empty stream");
    if (line.size() >= 1 && line.back() == '\r') line.pop_back();
    if (line != "ply") throw DataError("ply: missing magic line");

    PlyHeader header;
    bool format_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream fields(line);
        std::string keyword;
        fields >> keyword;
        if (keyword == "comment" || keyword == "obj_info" || keyword.empty()) continue;
        if (keyword == "format") {
            std::string fmt, version;
            fields >> fmt >> version;
            if (fmt == "ascii") {
                header.binary = false;
            } else if (fmt == "binary_little_endian") {
                header.binary = true;
            } else {
                throw DataError("ply: unsupported format '" + fmt + "'");
            }
            format_seen = true;
        } else if (keyword == "element") {
            PlyElement element;
            fields >> element.name >> element.count;
            if (fields.fail()) throw DataError("ply: malformed element line");
            header.elements.push_back(element);
        } else if (keyword == "property") {
            if (header.elements.empty()) throw DataError("ply: property before element");
            std::string type_name;
            fields >> type_name;
            PlyProperty prop;
            if (type_name == "list") {
                std::string count_name, value_name;
                fields >> count_name >> value_name >> prop.name;
                prop.is_list = true;
                prop.count_type = parse_type(count_name);
                prop.type = parse_type(value_name);
            } else {
                prop.type = parse_type(type_name);
                fields >> prop.name;
            }
            if (fields.fail()) throw DataError("ply: malformed property line");
            header.elements.back().properties.push_back(prop);
        } else if (keyword == "end_header") {
            if (!format_seen) throw DataError("ply: missing format line");
            return header;
        } else {
            throw DataError("ply: unexpected header keyword '" + keyword + "'");
        }
    }
    throw DataError("ply: header not terminated");
}

double read_binary_scalar(std::istream& in, PlyType type) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(type_size(type)))) {
        throw IoError("ply: truncated binary payload");
    }
    switch (type) {
        case PlyType::char8: return static_cast<double>(static_cast<signed char>(buf[0]));
        case PlyType::uchar8: return static_cast<double>(buf[0]);
        case PlyType::short16: {
            std::int16_t v;
            std::memcpy(&v, buf, 2);
            return v;
        }
        case PlyType::ushort16: {
            std::uint16_t v;
            std::memcpy(&v, buf, 2);
            return v;
        }
        case PlyType::int32: {
            std::int32_t v;
            std::memcpy(&v, buf, 4);
            return v;
        }
        case PlyType::uint32: {
            std::uint32_t v;
            std::memcpy(&v, buf, 4);
            return v;
        }
        case PlyType::float32: {
            float v;
            std::memcpy(&v, buf, 4);
            return v;
        }
        case PlyType::float64: {
            double v;
            std::memcpy(&v, buf, 8);
            return v;
        }
    }
    return 0.0;
}

double read_ascii_scalar(std::istream& in) {
    double v;
    if (!(in >> v)) throw IoError("ply: truncated ascii payload");
    return v;
}

}  // namespace

PointCloud parse_ply(std::istream& in) {
    const PlyHeader header = parse_header(in);

    PointCloud cloud;
    for (const PlyElement& element : header.elements) {
        const bool is_vertex = element.name == "vertex";
        int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1;
        if (is_vertex) {
            for (std::size_t p = 0; p < element.properties.size(); ++p) {
                const PlyProperty& prop = element.properties[p];
                if (prop.is_list) continue;
                if (prop.name == "x") ix = static_cast<int>(p);
                if (prop.name == "y") iy = static_cast<int>(p);
                if (prop.name == "z") iz = static_cast<int>(p);
                if (prop.name == "red") ir = static_cast<int>(p);
                if (prop.name == "green") ig = static_cast<int>(p);
                if (prop.name == "blue") ib = static_cast<int>(p);
            }
            if (ix < 0 || iy < 0 || iz < 0) throw DataError("ply: vertex element lacks x/y/z");
            cloud.points.reserve(element.count);
        }
        const bool has_rgb = ir >= 0 && ig >= 0 && ib >= 0;

        std::vector<double> values(element.properties.size());
        for (std::size_t row = 0; row < element.count; ++row) {
            for (std::size_t p = 0; p < element.properties.size(); ++p) {
                const PlyProperty& prop = element.properties[p];
                if (prop.is_list) {
                    const double n = header.binary ? read_binary_scalar(in, prop.count_type)
                                                   : read_ascii_scalar(in);
                    for (long k = 0; k < static_cast<long>(n); ++k) {
                        if (header.binary) {
                            read_binary_scalar(in, prop.type);
                        } else {
                            read_ascii_scalar(in);
                        }
                    }
                } else {
                    values[p] = header.binary ? read_binary_scalar(in, prop.type)
                                              : read_ascii_scalar(in);
                }
            }
            if (is_vertex) {
                cloud.points.emplace_back(values[ix], values[iy], values[iz]);
                if (has_rgb) {
                    cloud.colors.push_back({static_cast<std::uint8_t>(values[ir]),
                                            static_cast<std::uint8_t>(values[ig]),
                                            static_cast<std::uint8_t>(values[ib])});
                }
            }
        }
    }
    return cloud;
}

PointCloud load_ply(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return parse_ply(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_ply(std::ostream& out, const PointCloud& cloud, bool binary) {
    if (cloud.has_colors() && cloud.colors.size() != cloud.points.size()) {
        throw ArgumentError("ply: color count does not match point count");
    }
    out << "ply\n"
        << (binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n")
        << "element vertex " << cloud.points.size() << "\n"
        << "property float x\nproperty float y\nproperty float z\n";
    if (cloud.has_colors()) {
        out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    }
    out << "end_header\n";

    if (binary) {
        for (std::size_t i = 0; i < cloud.points.size(); ++i) {
            const float xyz[3] = {static_cast<float>(cloud.points[i].x()),
                                  static_cast<float>(cloud.points[i].y()),
                                  static_cast<float>(cloud.points[i].z())};
            out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
            if (cloud.has_colors()) {
                out.write(reinterpret_cast<const char*>(cloud.colors[i].data()), 3);
            }
        }
    } else {
        std::ostringstream body;
        body << std::setprecision(9);
        for (std::size_t i = 0; i < cloud.points.size(); ++i) {
            const Eigen::Vector3f p = cloud.points[i].cast<float>();
            body << p.x() << " " << p.y() << " " << p.z();
            if (cloud.has_colors()) {
                body << " " << int(cloud.colors[i][0]) << " " << int(cloud.colors[i][1]) << " "
                     << int(cloud.colors[i][2]);
            }
            body << "\n";
        }
        out << body.str();
    }
    if (!out) throw IoError("ply: write failed");
}

void save_ply(const std::filesystem::path& path, const PointCloud& cloud, bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_ply(out, cloud, binary);
}

}  // namespace panoblock
