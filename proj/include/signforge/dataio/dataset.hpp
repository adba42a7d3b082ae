#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "signforge/numcore/tensor.hpp"

namespace signforge::dataio {

inline constexpr std::size_t kImageHeight = 32;
inline constexpr std::size_t kImageWidth = 32;
inline constexpr std::size_t kImageChannels = 3;
inline constexpr std::size_t kImagePixels = kImageHeight * kImageWidth;           // 1024
inline constexpr std::size_t kImageValues = kImagePixels * kImageChannels;        // 3072

enum class SampleOrigin : std::uint8_t { Real = 0, Augmented = 1, Synthetic = 2 };
enum class Split : std::uint8_t { Train = 0, Test = 1 };

const char* split_name(Split s);

/// A 32x32x3 image in [0,1] plus its class label.
struct LabeledImage {
  numcore::Tensor pixels;  // {32, 32, 3}
  std::size_t label = 0;
  SampleOrigin origin = SampleOrigin::Real;
  std::string source_id;

  void validate(std::size_t num_classes) const;
};

struct Dataset {
  std::vector<LabeledImage> samples;
  std::size_t num_classes = 0;
  Split split = Split::Train;

  std::vector<std::size_t> class_histogram() const;
  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }

  /// Cheap structural checks: labels in range, pixel tensors shaped 32x32x3.
  void validate() const;

  /// Content hash over (num_classes, labels, pixels); order-sensitive.
  std::string content_hash() const;
};

/// Single-file cache: header (split, class count, per-class counts), then one
/// record per sample of label byte + 3072 little-endian float64 pixels.
void save_dataset_cache(const Dataset& data, const std::filesystem::path& path);

/// Loads a cache file. Sample source ids are regenerated as
/// "<split>:<index>"; they stay disjoint across the two split files.
Dataset load_dataset_cache(const std::filesystem::path& path);

}  // namespace signforge::dataio
