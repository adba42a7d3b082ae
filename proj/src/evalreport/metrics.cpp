#include "signforge/evalreport/metrics.hpp"

#include <cmath>
#include <sstream>

#include "signforge/numcore/ops.hpp"
#include "signforge/util/error.hpp"
#include "signforge/util/parallel.hpp"

namespace signforge::evalreport {

using numcore::Tensor;

util::CsvTable MetricsReport::to_csv() const {
  util::CsvTable t;
  t.header = {"metric", "value", "unit"};
  t.rows.push_back({"accuracy", util::format_double(accuracy), "fraction"});
  t.rows.push_back({"cross_entropy", util::format_double(cross_entropy), "nats"});
  t.rows.push_back({"micro_f1", util::format_double(micro_f1), "fraction"});
  t.rows.push_back({"macro_f1", util::format_double(macro_f1), "fraction"});
  t.rows.push_back(
      {"mean_prediction_entropy", util::format_double(mean_prediction_entropy), "bits"});
  t.rows.push_back({"sample_count", std::to_string(sample_count), "count"});
  for (std::size_t c = 0; c < per_class_accuracy.size(); ++c) {
    t.rows.push_back({"class_" + std::to_string(c) + "_accuracy",
                      util::format_double(per_class_accuracy[c]), "fraction"});
  }
  t.rows.push_back({"model_identity", model_identity, "sha256"});
  t.rows.push_back({"dataset_hash", dataset_hash, "sha256"});
  t.rows.push_back({"flags", flags, "text"});
  return t;
}

MetricsReport MetricsReport::from_csv(const util::CsvTable& table) {
  MetricsReport r;
  std::size_t metric_col = table.column("metric");
  std::size_t value_col = table.column("value");
  std::vector<std::pair<std::size_t, double>> per_class;
  for (const auto& row : table.rows) {
    const std::string& name = row[metric_col];
    const std::string& value = row[value_col];
    if (name == "accuracy") r.accuracy = util::parse_double(value, name);
    else if (name == "cross_entropy") r.cross_entropy = util::parse_double(value, name);
    else if (name == "micro_f1") r.micro_f1 = util::parse_double(value, name);
    else if (name == "macro_f1") r.macro_f1 = util::parse_double(value, name);
    else if (name == "mean_prediction_entropy")
      r.mean_prediction_entropy = util::parse_double(value, name);
    else if (name == "sample_count")
      r.sample_count = static_cast<std::size_t>(util::parse_double(value, name));
    else if (name == "model_identity") r.model_identity = value;
    else if (name == "dataset_hash") r.dataset_hash = value;
    else if (name == "flags") r.flags = value;
    else if (name.rfind("class_", 0) == 0) {
      auto cls = std::stoul(name.substr(6));
      per_class.emplace_back(cls, util::parse_double(value, name));
    }
  }
  if (!per_class.empty()) {
    r.per_class_accuracy.assign(per_class.size(), 0.0);
    for (auto& [cls, acc] : per_class) {
      if (cls < r.per_class_accuracy.size()) r.per_class_accuracy[cls] = acc;
    }
  }
  return r;
}

MetricsReport evaluate(const models::Network& model, const dataio::Dataset& data,
                       std::optional<double> eval_temperature) {
  if (data.empty()) throw DataError("evaluate: empty dataset");
  data.validate();
  const std::size_t n_cls = model.num_classes();
  if (n_cls != data.num_classes) {
    throw DataError("evaluate: model has " + std::to_string(n_cls) + " classes, dataset " +
                    std::to_string(data.num_classes));
  }
  double eval_t = eval_temperature.value_or(model.temperature());

  struct Slot {
    std::size_t predicted;
    double loss;
    double entropy;
  };
  std::vector<Slot> slots(data.size());

  // each worker clones the frozen model; forward caches are per-clone
  std::size_t workers = std::min(util::worker_count(), data.size());
  std::vector<models::Network> clones;
  clones.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) clones.emplace_back(model);
  std::size_t chunk = (data.size() + workers - 1) / workers;

  util::parallel_for(workers, [&](std::size_t w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(data.size(), begin + chunk);
    for (std::size_t i = begin; i < end; ++i) {
      const auto& sample = data.samples[i];
      auto pred = clones[w].predict_at(sample.pixels, eval_t);
      slots[i].predicted = pred.predicted_class();
      slots[i].loss =
          numcore::cross_entropy_loss(pred.probs, numcore::one_hot(sample.label, n_cls));
      slots[i].entropy = numcore::entropy_bits(pred.probs);
    }
  });

  // pooled confusion matrix
  std::vector<std::size_t> confusion(n_cls * n_cls, 0);
  double loss_sum = 0.0, entropy_sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    confusion[data.samples[i].label * n_cls + slots[i].predicted]++;
    loss_sum += slots[i].loss;
    entropy_sum += slots[i].entropy;
  }

  MetricsReport r;
  r.sample_count = data.size();
  std::size_t correct = 0;
  for (std::size_t c = 0; c < n_cls; ++c) correct += confusion[c * n_cls + c];
  r.accuracy = double(correct) / double(data.size());
  r.cross_entropy = loss_sum / double(data.size());
  r.mean_prediction_entropy = entropy_sum / double(data.size());

  // micro-F1 from pooled counts: TP = correct, FP = FN = misclassified
  double tp = double(correct);
  double fp = double(data.size() - correct);
  double fn = fp;
  double micro_precision = tp / (tp + fp);
  double micro_recall = tp / (tp + fn);
  r.micro_f1 = (micro_precision + micro_recall) > 0.0
                   ? 2.0 * micro_precision * micro_recall / (micro_precision + micro_recall)
                   : 0.0;

  r.per_class_accuracy.assign(n_cls, 0.0);
  double macro_sum = 0.0;
  for (std::size_t c = 0; c < n_cls; ++c) {
    std::size_t support = 0, predicted_as = 0;
    for (std::size_t k = 0; k < n_cls; ++k) {
      support += confusion[c * n_cls + k];
      predicted_as += confusion[k * n_cls + c];
    }
    double cls_tp = double(confusion[c * n_cls + c]);
    double precision = predicted_as > 0 ? cls_tp / double(predicted_as) : 0.0;
    double recall = support > 0 ? cls_tp / double(support) : 0.0;
    r.per_class_accuracy[c] = recall;
    macro_sum += (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall)
                                            : 0.0;
  }
  r.macro_f1 = macro_sum / double(n_cls);

  r.model_identity = model.identity_hash();
  r.dataset_hash = data.content_hash();
  r.flags = "eval_T=" + util::format_double(eval_t, 3);
  return r;
}

Comparison compare_runs(const std::vector<MetricsReport>& reports,
                        const std::vector<std::string>& names) {
  if (reports.empty()) throw DataError("compare_runs: no reports");
  if (names.size() != reports.size()) throw DataError("compare_runs: name/report count mismatch");
  for (const auto& r : reports) {
    if (r.per_class_accuracy.size() != reports.front().per_class_accuracy.size()) {
      throw DataError("compare_runs: reports disagree on class count");
    }
  }

  struct MetricRow {
    const char* name;
    double MetricsReport::* field;
  };
  static constexpr MetricRow kRows[] = {
      {"accuracy", &MetricsReport::accuracy},
      {"cross_entropy", &MetricsReport::cross_entropy},
      {"micro_f1", &MetricsReport::micro_f1},
      {"macro_f1", &MetricsReport::macro_f1},
      {"mean_prediction_entropy", &MetricsReport::mean_prediction_entropy},
  };

  Comparison out;
  out.csv.header = {"metric"};
  for (const auto& n : names) out.csv.header.push_back(n);
  bool with_delta = reports.size() > 1;
  if (with_delta) {
    for (std::size_t i = 1; i < names.size(); ++i) {
      out.csv.header.push_back("delta_" + names[i]);
    }
  }

  std::ostringstream text;
  text << std::left;
  constexpr int kNameWidth = 26, kColWidth = 16;
  text.width(kNameWidth);
  text << "metric";
  for (const auto& n : names) {
    text.width(kColWidth);
    text << n;
  }
  text << "\n";

  for (const auto& row : kRows) {
    std::vector<std::string> cells = {row.name};
    text.width(kNameWidth);
    text << row.name;
    for (const auto& r : reports) {
      cells.push_back(util::format_double(r.*row.field));
      text.width(kColWidth);
      text << cells.back();
    }
    if (with_delta) {
      for (std::size_t i = 1; i < reports.size(); ++i) {
        cells.push_back(util::format_double(reports[i].*row.field - reports[0].*row.field));
      }
    }
    text << "\n";
    out.csv.rows.push_back(std::move(cells));
  }
  out.text = text.str();
  return out;
}

}  // namespace signforge::evalreport
