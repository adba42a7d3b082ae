#pragma once

#include <optional>
#include <string>
#include <vector>

#include "signforge/dataio/dataset.hpp"
#include "signforge/models/network.hpp"
#include "signforge/util/csv.hpp"

namespace signforge::evalreport {

/// All metrics for one evaluation run. Entropy is mean Shannon entropy of
/// the prediction vectors in bits per sample. micro_f1 equals accuracy for
/// single-label classification; both are kept because the published tables
/// report both.
struct MetricsReport {
  double accuracy = 0.0;
  double cross_entropy = 0.0;        // mean per-sample loss, nats
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;             // supplementary
  double mean_prediction_entropy = 0.0;  // bits/sample
  std::vector<double> per_class_accuracy;
  std::size_t sample_count = 0;
  std::string model_identity;
  std::string dataset_hash;
  std::string flags;  // e.g. "eval_T=100"

  util::CsvTable to_csv() const;
  static MetricsReport from_csv(const util::CsvTable& table);
};

/// Eval-mode metrics over a dataset. eval_temperature overrides the model's
/// own temperature for the probability head (argmax-invariant). Workers run
/// over per-thread model clones, so results do not depend on thread count.
MetricsReport evaluate(const models::Network& model, const dataio::Dataset& data,
                       std::optional<double> eval_temperature = std::nullopt);

/// Side-by-side metric table; one column per report plus deltas against the
/// first when more than one is given. Throws DataError when the reports
/// disagree on class count.
struct Comparison {
  util::CsvTable csv;
  std::string text;  // aligned human-readable rendering
};

Comparison compare_runs(const std::vector<MetricsReport>& reports,
                        const std::vector<std::string>& names);

}  // namespace signforge::evalreport
