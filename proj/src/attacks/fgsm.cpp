#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "signforge/attacks/attacks.hpp"
#include "signforge/util/error.hpp"
#include "signforge/util/parallel.hpp"

namespace signforge::attacks {

using dataio::LabeledImage;
using models::Network;
using numcore::Tensor;

const char* attack_method_name(AttackMethod m) {
  return m == AttackMethod::Fgsm ? "FGSM" : "JSMA";
}

void FgsmConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParamError("fgsm epsilon must be in (0,1]");
}

std::string FgsmConfig::to_json() const {
  return std::string("{\"epsilon\":") + util::format_double(epsilon, 6) +
         ",\"clip\":" + (clip ? "true" : "false") + "}";
}

namespace {

double measure_distortion_pct(const Tensor& original, const Tensor& perturbed) {
  std::size_t touched = 0;
  for (std::size_t p = 0; p < dataio::kImagePixels; ++p) {
    for (std::size_t c = 0; c < 3; ++c) {
      if (perturbed[p * 3 + c] != original[p * 3 + c]) {
        ++touched;
        break;
      }
    }
  }
  return 100.0 * double(touched) / double(dataio::kImagePixels);
}

double measure_linf(const Tensor& original, const Tensor& perturbed) {
  double m = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    m = std::max(m, std::abs(perturbed[i] - original[i]));
  }
  return m;
}

}  // namespace

Tensor gradient_sign_map(Network& model, const LabeledImage& sample) {
  Tensor grad = model.gradient_wrt_input(sample.pixels, sample.label);
  Tensor map(grad.shape());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    map[i] = grad[i] > 0.0 ? 1.0 : (grad[i] < 0.0 ? -1.0 : 0.0);
  }
  return map;
}

AdversarialExample fgsm(Network& model, const LabeledImage& sample, const FgsmConfig& config) {
  config.validate();
  Tensor map = gradient_sign_map(model, sample);

  AdversarialExample ex;
  ex.original = sample;
  ex.method = AttackMethod::Fgsm;
  ex.params_json = config.to_json();
  ex.perturbed = Tensor(sample.pixels.shape());
  for (std::size_t i = 0; i < map.size(); ++i) {
    double v = sample.pixels[i] + config.epsilon * map[i];
    ex.perturbed[i] = config.clip ? std::clamp(v, 0.0, 1.0) : v;
  }
  ex.substitute_prediction = model.predict(ex.perturbed);
  ex.success_on_substitute = ex.substitute_prediction.predicted_class() != sample.label;
  ex.distortion_pct = measure_distortion_pct(sample.pixels, ex.perturbed);
  ex.linf_norm = measure_linf(sample.pixels, ex.perturbed);
  return ex;
}

util::CsvTable SweepTable::to_csv() const {
  util::CsvTable t;
  t.header = {"epsilon", "accuracy", "mean_linf"};
  for (const auto& row : rows) {
    t.rows.push_back({util::format_double(row.epsilon), util::format_double(row.accuracy),
                      util::format_double(row.mean_linf)});
  }
  return t;
}

SweepTable SweepTable::from_csv(const util::CsvTable& table) {
  SweepTable s;
  std::size_t eps_col = table.column("epsilon");
  std::size_t acc_col = table.column("accuracy");
  std::size_t linf_col = table.column("mean_linf");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    std::string ctx = "sweep row " + std::to_string(i + 2);
    s.rows.push_back({util::parse_double(table.rows[i][eps_col], ctx),
                      util::parse_double(table.rows[i][acc_col], ctx),
                      util::parse_double(table.rows[i][linf_col], ctx)});
  }
  return s;
}

SweepTable epsilon_sweep(Network& model, const dataio::Dataset& data, double eps_from,
                         double eps_to, double eps_step) {
  if (data.empty()) throw DataError("epsilon_sweep: empty dataset");
  if (!(eps_step > 0.0) || eps_to < eps_from) throw ParamError("bad epsilon range");

  // one sign map per image, shared across the whole sweep
  std::vector<Tensor> maps(data.size());
  std::vector<std::size_t> clean_pred(data.size());
  {
    std::size_t workers = std::min(util::worker_count(), data.size());
    std::vector<Network> clones(workers, model);
    std::size_t chunk = (data.size() + workers - 1) / workers;
    util::parallel_for(workers, [&](std::size_t w) {
      for (std::size_t i = w * chunk; i < std::min(data.size(), (w + 1) * chunk); ++i) {
        maps[i] = gradient_sign_map(clones[w], data.samples[i]);
        clean_pred[i] = clones[w].predict(data.samples[i].pixels).predicted_class();
      }
    });
  }

  std::vector<double> epsilons;
  for (std::size_t k = 1;; ++k) {
    double eps = eps_from + double(k - 1) * eps_step;
    if (eps > eps_to + 1e-12) break;
    epsilons.push_back(eps);
  }

  SweepTable out;
  // baseline row: clean accuracy at eps = 0
  {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (clean_pred[i] == data.samples[i].label) ++correct;
    }
    out.rows.push_back({0.0, double(correct) / double(data.size()), 0.0});
  }

  std::vector<SweepRow> rows(epsilons.size());
  std::size_t workers = std::min(util::worker_count(), epsilons.size());
  std::vector<Network> clones(workers, model);
  std::size_t chunk = (epsilons.size() + workers - 1) / workers;
  util::parallel_for(workers, [&](std::size_t w) {
    for (std::size_t k = w * chunk; k < std::min(epsilons.size(), (w + 1) * chunk); ++k) {
      double eps = epsilons[k];
      std::size_t correct = 0;
      double linf_sum = 0.0;
      Tensor perturbed({dataio::kImageHeight, dataio::kImageWidth, dataio::kImageChannels});
      for (std::size_t i = 0; i < data.size(); ++i) {
        const Tensor& x = data.samples[i].pixels;
        for (std::size_t j = 0; j < x.size(); ++j) {
          perturbed[j] = std::clamp(x[j] + eps * maps[i][j], 0.0, 1.0);
        }
        if (clones[w].predict(perturbed).predicted_class() == data.samples[i].label) ++correct;
        linf_sum += measure_linf(x, perturbed);
      }
      rows[k] = {eps, double(correct) / double(data.size()),
                 linf_sum / double(data.size())};
    }
  });
  out.rows.insert(out.rows.end(), rows.begin(), rows.end());
  return out;
}

evalreport::MetricsReport transfer_attack(const Network& victim, const AdversarialSet& set) {
  if (set.examples.empty()) throw DataError("transfer_attack: empty adversarial set");
  if (!set.crafting_model_identity.empty() &&
      set.crafting_model_identity == victim.identity_hash()) {
    std::cerr << "warning: adversarial set was crafted on the victim model itself; "
                 "this measures the white-box baseline, not transfer\n";
  }
  dataio::Dataset adv;
  adv.num_classes = victim.num_classes();
  adv.split = dataio::Split::Test;
  for (const auto& ex : set.examples) {
    dataio::LabeledImage img;
    img.pixels = ex.perturbed;
    img.label = ex.original.label;
    img.origin = ex.original.origin;
    img.source_id = ex.original.source_id;
    adv.samples.push_back(std::move(img));
  }
  return evalreport::evaluate(victim, adv);
}

evalreport::MetricsReport clean_counterpart_metrics(const Network& victim,
                                                    const AdversarialSet& set) {
  if (set.examples.empty()) throw DataError("clean_counterpart_metrics: empty adversarial set");
  dataio::Dataset clean;
  clean.num_classes = victim.num_classes();
  clean.split = dataio::Split::Test;
  for (const auto& ex : set.examples) clean.samples.push_back(ex.original);
  return evalreport::evaluate(victim, clean);
}

double spearman_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw DataError("spearman: need two equal-length sequences of >= 2 values");
  }
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    // mean ranks for ties
    std::size_t i = 0;
    while (i < idx.size()) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      double mean_rank = 0.5 * double(i + j);
      for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = mean_rank;
      i = j + 1;
    }
    return rank;
  };
  auto rx = ranks(xs), ry = ranks(ys);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= double(rx.size());
  my /= double(ry.size());
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  if (dx == 0.0 || dy == 0.0) return 0.0;
  return num / std::sqrt(dx * dy);
}

}  // namespace signforge::attacks
