#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "signforge/dataio/dataset.hpp"
#include "signforge/evalreport/metrics.hpp"
#include "signforge/models/network.hpp"

namespace signforge::attacks {

struct FgsmConfig {
  double epsilon = 0.1;  // perturbation size in pixel-value units
  bool clip = true;

  void validate() const;
  std::string to_json() const;
};

struct JsmaConfig {
  std::size_t target_class = 0;
  double theta = 1.0;               // per-feature push; +1 saturates up
  double max_distortion_pct = 5.0;  // of the 1024 spatial pixels
  bool pair_search = true;

  void validate() const;
  std::string to_json() const;
};

enum class AttackMethod : std::uint8_t { Fgsm = 0, Jsma = 1 };

const char* attack_method_name(AttackMethod m);

struct AdversarialExample {
  dataio::LabeledImage original;
  numcore::Tensor perturbed;  // 32x32x3 in [0,1]
  AttackMethod method = AttackMethod::Fgsm;
  std::string params_json;
  models::Prediction substitute_prediction;  // on the perturbed image
  bool success_on_substitute = false;
  double distortion_pct = 0.0;  // spatial pixels touched / 1024
  double linf_norm = 0.0;
  std::size_t iterations = 0;  // JSMA loop count; 0 for FGSM
};

/// Elementwise sign of dJ/dx with sign(0) = 0; values in {-1, 0, +1}.
/// One map serves a whole epsilon sweep for the same image.
numcore::Tensor gradient_sign_map(models::Network& model, const dataio::LabeledImage& sample);

/// One-shot untargeted attack: perturbed = clip(x + eps * sign(dJ/dx)).
AdversarialExample fgsm(models::Network& model, const dataio::LabeledImage& sample,
                        const FgsmConfig& config);

struct SweepRow {
  double epsilon;
  double accuracy;
  double mean_linf;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // baseline eps=0 row first

  util::CsvTable to_csv() const;
  static SweepTable from_csv(const util::CsvTable& table);
};

/// Accuracy of `model` on its own FGSM examples for eps in
/// [eps_from, eps_to] stepped by eps_step, one shared sign map per image.
/// Row 0 is the clean-accuracy baseline at eps=0.
SweepTable epsilon_sweep(models::Network& model, const dataio::Dataset& data,
                         double eps_from = 0.01, double eps_to = 0.30,
                         double eps_step = 0.01);

/// Targeted saliency-map attack over pixel pairs; saturates the selected
/// spatial pixels and stops on success, distortion overrun, or saliency
/// exhaustion. Failure is a result state, not an error.
AdversarialExample jsma(models::Network& model, const dataio::LabeledImage& sample,
                        const JsmaConfig& config);

struct JsmaMatrixEntry {
  std::size_t source_class;
  std::size_t target_class;
  bool success;
  double distortion_pct;
  std::size_t iterations;
};

struct JsmaMatrixResult {
  std::vector<JsmaMatrixEntry> entries;  // N*(N-1), diagonal excluded
  std::vector<AdversarialExample> examples;
  double success_rate = 0.0;
  double mean_distortion_on_success = 0.0;

  util::CsvTable to_csv() const;
};

/// Runs jsma for every (source, target != source) pair, one source sample
/// per class. Throws DataError unless exactly one sample per class is given.
JsmaMatrixResult jsma_matrix(models::Network& model,
                             const std::vector<dataio::LabeledImage>& one_per_class,
                             const JsmaConfig& base_config);

/// An adversarial set plus the identity of the model that crafted it.
struct AdversarialSet {
  std::string crafting_model_identity;
  std::vector<AdversarialExample> examples;
};

/// Evaluates the victim on the perturbed images against the true labels.
/// Warns (stderr) when the set was crafted on the victim itself; that is a
/// white-box baseline, not the transfer protocol. Throws DataError on an
/// empty set.
evalreport::MetricsReport transfer_attack(const models::Network& victim,
                                          const AdversarialSet& set);

/// Clean-counterpart metrics for the same set (evaluates original pixels).
evalreport::MetricsReport clean_counterpart_metrics(const models::Network& victim,
                                                    const AdversarialSet& set);

void save_adversarial_set(const AdversarialSet& set, const std::filesystem::path& path);
AdversarialSet load_adversarial_set(const std::filesystem::path& path);

/// Spearman rank correlation between two equal-length sequences.
double spearman_correlation(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace signforge::attacks
