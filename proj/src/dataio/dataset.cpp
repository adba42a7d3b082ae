#include "signforge/dataio/dataset.hpp"

#include <cstring>
#include <fstream>

#include "signforge/util/error.hpp"
#include "signforge/util/sha256.hpp"

namespace signforge::dataio {

namespace {

constexpr char kMagic[4] = {'S', 'G', 'D', 'C'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const char* what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) {
    throw FormatError(FormatError::Kind::Truncated,
                      std::string("dataset cache truncated while reading ") + what);
  }
  return v;
}

}  // namespace

const char* split_name(Split s) { return s == Split::Train ? "train" : "test"; }

void LabeledImage::validate(std::size_t num_classes) const {
  if (pixels.shape() != std::vector<std::size_t>{kImageHeight, kImageWidth, kImageChannels}) {
    throw ShapeError("sample '" + source_id + "': pixels must be 32x32x3, got " +
                     numcore::shape_to_string(pixels.shape()));
  }
  if (label >= num_classes) {
    throw DataError("sample '" + source_id + "': label " + std::to_string(label) +
                    " out of range for " + std::to_string(num_classes) + " classes");
  }
}

std::vector<std::size_t> Dataset::class_histogram() const {
  std::vector<std::size_t> counts(num_classes, 0);
  for (const auto& s : samples) {
    if (s.label < counts.size()) ++counts[s.label];
  }
  return counts;
}

void Dataset::validate() const {
  if (num_classes < 2) throw DataError("dataset needs at least 2 classes");
  for (const auto& s : samples) s.validate(num_classes);
}

std::string Dataset::content_hash() const {
  util::Sha256 h;
  std::uint64_t n = num_classes;
  h.update(&n, sizeof(n));
  for (const auto& s : samples) {
    std::uint64_t label = s.label;
    h.update(&label, sizeof(label));
    h.update(s.pixels.data(), s.pixels.size() * sizeof(double));
  }
  return util::digest_hex(h.digest());
}

void save_dataset_cache(const Dataset& data, const std::filesystem::path& path) {
  data.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open cache for writing: " + path.string());

  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kVersion);
  write_pod(out, static_cast<std::uint8_t>(data.split));
  write_pod(out, static_cast<std::uint32_t>(data.num_classes));
  write_pod(out, static_cast<std::uint64_t>(data.samples.size()));
  for (std::size_t count : data.class_histogram()) {
    write_pod(out, static_cast<std::uint64_t>(count));
  }
  for (const auto& s : data.samples) {
    write_pod(out, static_cast<std::uint8_t>(s.label));
    out.write(reinterpret_cast<const char*>(s.pixels.data()),
              static_cast<std::streamsize>(kImageValues * sizeof(double)));
  }
  if (!out) throw IoError("short write: " + path.string());
}

Dataset load_dataset_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open cache for reading: " + path.string());

  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError(FormatError::Kind::BadMagic,
                      "not a dataset cache file: " + path.string());
  }
  auto version = read_pod<std::uint32_t>(in, "version");
  if (version != kVersion) {
    throw FormatError(FormatError::Kind::BadVersion,
                      "unsupported dataset cache version " + std::to_string(version));
  }

  Dataset data;
  data.split = static_cast<Split>(read_pod<std::uint8_t>(in, "split"));
  data.num_classes = read_pod<std::uint32_t>(in, "class count");
  auto sample_count = read_pod<std::uint64_t>(in, "sample count");
  std::vector<std::uint64_t> counts(data.num_classes);
  for (auto& c : counts) c = read_pod<std::uint64_t>(in, "class histogram");

  data.samples.reserve(sample_count);
  for (std::uint64_t i = 0; i < sample_count; ++i) {
    LabeledImage img;
    img.label = read_pod<std::uint8_t>(in, "sample label");
    numcore::Tensor pixels({kImageHeight, kImageWidth, kImageChannels});
    in.read(reinterpret_cast<char*>(pixels.data()),
            static_cast<std::streamsize>(kImageValues * sizeof(double)));
    if (!in) {
      throw FormatError(FormatError::Kind::Truncated,
                        "dataset cache truncated at sample " + std::to_string(i));
    }
    img.pixels = std::move(pixels);
    img.source_id = std::string(split_name(data.split)) + ":" + std::to_string(i);
    data.samples.push_back(std::move(img));
  }

  std::uint64_t total = 0;
  auto histogram = data.class_histogram();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] != histogram[c]) {
      throw FormatError(FormatError::Kind::Corrupt,
                        "cache histogram mismatch for class " + std::to_string(c));
    }
    total += counts[c];
  }
  if (total != sample_count) {
    throw FormatError(FormatError::Kind::Corrupt, "cache histogram does not sum to sample count");
  }
  data.validate();
  return data;
}

}  // namespace signforge::dataio
