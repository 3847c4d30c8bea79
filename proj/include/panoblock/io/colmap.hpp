#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "panoblock/scene/pose.hpp"

namespace panoblock {

// Parses the SfM images text format: comment lines start with '#', then two
// lines per image, the first being
//   IMAGE_ID QW QX QY QZ TX TY TZ CAMERA_ID NAME
// and the second the 2D point observations (ignored here). Poses come back
// sorted by the frame index parsed from the numeric suffix of NAME.
std::vector<CameraPose> parse_sfm_text(std::istream& in);
std::vector<CameraPose> load_sfm_text(const std::filesystem::path& path);

// Writes the same format. Image names are frame_<id padded to 6>.png and the
// observation lines are left empty.
void write_sfm_text(std::ostream& out, const std::vector<CameraPose>& poses);
void save_sfm_text(const std::filesystem::path& path, const std::vector<CameraPose>& poses);

// Frame index = last run of digits in the basename, extension excluded.
// Throws DataError when the name carries no digits.
long frame_index_from_name(const std::string& name);

}  // namespace panoblock
