#pragma once

#include <filesystem>
#include <utility>

#include "signforge/dataio/dataset.hpp"

namespace signforge::dataio {

/// GTSRB-format loader. The root either holds train/ and test/ directories
/// of per-class folders, or per-class folders directly (then an 80/20 split
/// is derived from a stable hash of each file path). Each class folder
/// carries a semicolon-delimited annotation CSV:
///   Filename;Width;Height;Roi.X1;Roi.Y1;Roi.X2;Roi.Y2;ClassId
/// Images with either dimension below min_size are dropped; the rest are
/// ROI-cropped, bilinear-resized to 32x32, and scaled to [0,1]. Malformed
/// rows and unreadable files produce per-file warnings on stderr; a class
/// ending up empty is fatal.
std::pair<Dataset, Dataset> load_gtsrb(const std::filesystem::path& root,
                                       std::size_t min_size = 32);

}  // namespace signforge::dataio
