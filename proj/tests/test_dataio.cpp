#include <doctest.h>

#include <filesystem>
#include <set>

#include "signforge/dataio/dataset.hpp"
#include "signforge/dataio/synthetic.hpp"
#include "signforge/models/network.hpp"
#include "signforge/models/train.hpp"
#include "signforge/util/csv.hpp"
#include "signforge/util/error.hpp"

using namespace signforge;
using dataio::Dataset;
using numcore::Tensor;

TEST_CASE("synthetic generation is deterministic in the seed") {
  auto [train_a, test_a] = dataio::generate_synthetic(4, 20, 7);
  auto [train_b, test_b] = dataio::generate_synthetic(4, 20, 7);
  auto [train_c, test_c] = dataio::generate_synthetic(4, 20, 8);

  CHECK(train_a.content_hash() == train_b.content_hash());
  CHECK(test_a.content_hash() == test_b.content_hash());
  CHECK(train_a.content_hash() != train_c.content_hash());
}

TEST_CASE("synthetic split arithmetic before imbalance thinning") {
  // 8 classes x 200 => 1280 train + 320 test at the 80/20 split; thinning
  // only ever removes train samples
  auto [train, test] = dataio::generate_synthetic(8, 200, 3);
  CHECK(test.size() == 320);
  CHECK(train.size() <= 1280);
  CHECK(train.size() >= 8 * 3);
  auto test_counts = test.class_histogram();
  for (std::size_t c = 0; c < 8; ++c) CHECK(test_counts[c] == 40);

  // imbalance present: some class got thinned below the full 160
  auto train_counts = train.class_histogram();
  CHECK(*std::min_element(train_counts.begin(), train_counts.end()) < 160);
  CHECK(train_counts[0] == 160);  // class 0 stays full as the anchor
}

TEST_CASE("synthetic pixels in range, labels valid, source ids disjoint") {
  auto [train, test] = dataio::generate_synthetic(6, 30, 11);
  train.validate();
  test.validate();
  std::set<std::string> ids;
  for (const auto& s : train.samples) ids.insert(s.source_id);
  for (const auto& s : test.samples) ids.insert(s.source_id);
  CHECK(ids.size() == train.size() + test.size());
  for (const auto& s : train.samples) {
    for (std::size_t i = 0; i < s.pixels.size(); ++i) {
      CHECK(s.pixels[i] >= 0.0);
      CHECK(s.pixels[i] <= 1.0);
    }
  }
}

TEST_CASE("synthetic rejects bad arguments") {
  CHECK_THROWS_AS(dataio::generate_synthetic(1, 20, 0), ParamError);
  CHECK_THROWS_AS(dataio::generate_synthetic(44, 20, 0), ParamError);
}

TEST_CASE("a linear probe separates 4 synthetic classes") {
  auto [train, test] = dataio::generate_synthetic(4, 50, 21);

  std::vector<std::unique_ptr<numcore::Layer>> layers;
  layers.push_back(numcore::make_layer(numcore::LayerSpec::flatten(), {32, 32, 3}));
  layers.push_back(numcore::make_layer(numcore::LayerSpec::dense(4), {32 * 32 * 3}));
  models::Network probe(models::ArchitectureId::AdversarialCnn, 4, 1.0, 1.0, false,
                        std::move(layers));

  numcore::OptimizerConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = 5;
  cfg.batch_size = 8;
  cfg.rng_seed = 5;
  models::train(probe, train, cfg);

  std::size_t correct = 0;
  for (const auto& s : test.samples) {
    if (probe.predict(s.pixels).predicted_class() == s.label) ++correct;
  }
  CHECK(double(correct) / double(test.size()) > 0.6);
}

TEST_CASE("dataset cache round trip preserves content") {
  auto dir = std::filesystem::temp_directory_path() / "signforge_cache_test";
  std::filesystem::create_directories(dir);
  auto path = dir / "train.cache";

  auto [train, test] = dataio::generate_synthetic(3, 15, 2);
  dataio::save_dataset_cache(train, path);
  Dataset loaded = dataio::load_dataset_cache(path);

  CHECK(loaded.num_classes == train.num_classes);
  CHECK(loaded.split == dataio::Split::Train);
  REQUIRE(loaded.size() == train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    CHECK(loaded.samples[i].label == train.samples[i].label);
    CHECK(loaded.samples[i].source_id == "train:" + std::to_string(i));
    for (std::size_t k = 0; k < dataio::kImageValues; ++k) {
      CHECK(loaded.samples[i].pixels[k] == train.samples[i].pixels[k]);
    }
  }
  // identical bytes on re-save
  auto path2 = dir / "again.cache";
  dataio::save_dataset_cache(loaded, path2);
  CHECK(util::read_text_file(path) == util::read_text_file(path2));

  std::filesystem::remove_all(dir);
}

TEST_CASE("dataset cache rejects corruption") {
  auto dir = std::filesystem::temp_directory_path() / "signforge_cache_bad";
  std::filesystem::create_directories(dir);
  auto path = dir / "x.cache";
  auto [train, test] = dataio::generate_synthetic(2, 10, 2);
  dataio::save_dataset_cache(train, path);

  auto bytes = util::read_text_file(path);
  util::write_text_file(path, bytes.substr(0, bytes.size() - 100));
  CHECK_THROWS_AS(dataio::load_dataset_cache(path), FormatError);

  util::write_text_file(path, "XXXX" + bytes.substr(4));
  CHECK_THROWS_AS(dataio::load_dataset_cache(path), FormatError);

  std::filesystem::remove_all(dir);
}

TEST_CASE("histogram is consistent with samples") {
  auto [train, test] = dataio::generate_synthetic(5, 20, 13);
  auto counts = train.class_histogram();
  std::size_t total = 0;
  for (auto c : counts) total += c;
  CHECK(total == train.size());
}
