#include "signforge/dataio/gtsrb.hpp"

#include <algorithm>
#include <iostream>
#include <map>

#include "signforge/dataio/ppm.hpp"
#include "signforge/util/csv.hpp"
#include "signforge/util/error.hpp"
#include "signforge/util/sha256.hpp"

namespace signforge::dataio {

namespace fs = std::filesystem;
using numcore::Tensor;

namespace {

struct Row {
  std::string filename;
  std::size_t roi_x1, roi_y1, roi_x2, roi_y2;
  std::size_t class_id;
};

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

std::vector<Row> parse_annotations(const fs::path& csv_path) {
  auto table = util::read_csv(csv_path, ';');
  std::size_t col_file = table.column("Filename");
  std::size_t col_x1 = table.column("Roi.X1");
  std::size_t col_y1 = table.column("Roi.Y1");
  std::size_t col_x2 = table.column("Roi.X2");
  std::size_t col_y2 = table.column("Roi.Y2");
  std::size_t col_cls = table.column("ClassId");

  std::vector<Row> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& cells = table.rows[i];
    try {
      Row r;
      r.filename = cells[col_file];
      r.roi_x1 = std::stoul(cells[col_x1]);
      r.roi_y1 = std::stoul(cells[col_y1]);
      r.roi_x2 = std::stoul(cells[col_x2]);
      r.roi_y2 = std::stoul(cells[col_y2]);
      r.class_id = std::stoul(cells[col_cls]);
      if (r.roi_x2 <= r.roi_x1 || r.roi_y2 <= r.roi_y1) throw std::invalid_argument("roi");
      rows.push_back(std::move(r));
    } catch (const std::exception&) {
      warn(csv_path.string() + " row " + std::to_string(i + 2) + ": malformed, skipped");
    }
  }
  return rows;
}

Tensor crop(const Tensor& img, std::size_t x1, std::size_t y1, std::size_t x2,
            std::size_t y2) {
  x2 = std::min(x2, img.dim(1));
  y2 = std::min(y2, img.dim(0));
  Tensor out({y2 - y1, x2 - x1, 3});
  for (std::size_t y = y1; y < y2; ++y) {
    for (std::size_t x = x1; x < x2; ++x) {
      for (std::size_t c = 0; c < 3; ++c) out(y - y1, x - x1, c) = img(y, x, c);
    }
  }
  return out;
}

struct Loaded {
  std::vector<LabeledImage> samples;
  std::size_t max_class = 0;
};

// One directory of per-class folders with annotation CSVs.
Loaded load_pool(const fs::path& dir, std::size_t min_size, const std::string& id_prefix) {
  Loaded out;
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end());

  for (const auto& class_dir : class_dirs) {
    std::vector<fs::path> csvs;
    for (const auto& entry : fs::directory_iterator(class_dir)) {
      if (entry.path().extension() == ".csv") csvs.push_back(entry.path());
    }
    std::sort(csvs.begin(), csvs.end());
    if (csvs.empty()) {
      warn(class_dir.string() + ": no annotation csv, directory skipped");
      continue;
    }
    for (const auto& csv_path : csvs) {
      for (const auto& row : parse_annotations(csv_path)) {
        fs::path img_path = class_dir / row.filename;
        Tensor raw;
        try {
          raw = read_ppm(img_path);
        } catch (const Error& e) {
          warn(std::string(e.what()) + ", file skipped");
          continue;
        }
        if (raw.dim(0) < min_size || raw.dim(1) < min_size) continue;  // size filter
        if (row.roi_x1 >= raw.dim(1) || row.roi_y1 >= raw.dim(0)) {
          warn(img_path.string() + ": ROI outside image, file skipped");
          continue;
        }
        LabeledImage sample;
        sample.pixels = resize_bilinear(crop(raw, row.roi_x1, row.roi_y1, row.roi_x2, row.roi_y2),
                                        kImageHeight, kImageWidth);
        sample.label = row.class_id;
        sample.origin = SampleOrigin::Real;
        sample.source_id = id_prefix + fs::relative(img_path, dir).generic_string();
        out.max_class = std::max(out.max_class, row.class_id);
        out.samples.push_back(std::move(sample));
      }
    }
  }
  return out;
}

}  // namespace

std::pair<Dataset, Dataset> load_gtsrb(const fs::path& root, std::size_t min_size) {
  if (!fs::exists(root)) throw IoError("gtsrb root does not exist: " + root.string());

  Dataset train, test;
  train.split = Split::Train;
  test.split = Split::Test;
  std::size_t max_class = 0;

  if (fs::exists(root / "train") && fs::exists(root / "test")) {
    Loaded tr = load_pool(root / "train", min_size, "train/");
    Loaded te = load_pool(root / "test", min_size, "test/");
    train.samples = std::move(tr.samples);
    test.samples = std::move(te.samples);
    max_class = std::max(tr.max_class, te.max_class);
  } else {
    // single pool: stable hash of the file path decides the split
    Loaded pool = load_pool(root, min_size, "");
    max_class = pool.max_class;
    for (auto& sample : pool.samples) {
      std::string h = util::sha256_hex(sample.source_id);
      bool to_test = (std::stoul(h.substr(0, 4), nullptr, 16) % 5) == 0;  // ~20%
      (to_test ? test : train).samples.push_back(std::move(sample));
    }
  }

  if (train.samples.empty()) throw DataError("gtsrb: no usable training images under " + root.string());
  train.num_classes = test.num_classes = max_class + 1;

  auto counts = train.class_histogram();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw DataError("gtsrb: class " + std::to_string(c) + " has no training samples");
    }
  }
  return {std::move(train), std::move(test)};
}

}  // namespace signforge::dataio
