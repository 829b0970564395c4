#include "curricomp/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace curricomp {

Metrics compute_metrics(const std::vector<std::size_t>& truth,
                        const std::vector<std::size_t>& predicted) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("metrics: truth/prediction lengths differ");
  }
  if (truth.empty()) {
    throw std::invalid_argument("metrics: empty evaluation set");
  }

  Metrics m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= kNumCompoundClasses || predicted[i] >= kNumCompoundClasses) {
      throw std::invalid_argument("metrics: class index out of range");
    }
    m.confusion[truth[i]][predicted[i]] += 1;
  }

  double f1_sum = 0.0;
  for (std::size_t c = 0; c < kNumCompoundClasses; ++c) {
    int tp = m.confusion[c][c];
    int fn = 0, fp = 0;
    for (std::size_t o = 0; o < kNumCompoundClasses; ++o) {
      if (o != c) {
        fn += m.confusion[c][o];
        fp += m.confusion[o][c];
      }
    }
    m.support[c] = tp + fn;
    m.zero_support[c] = m.support[c] == 0;
    m.precision[c] = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    m.recall[c] = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    const double pr = m.precision[c] + m.recall[c];
    m.per_class_f1[c] = pr > 0.0 ? 2.0 * m.precision[c] * m.recall[c] / pr : 0.0;
    f1_sum += m.per_class_f1[c];
  }
  m.macro_f1 = f1_sum / static_cast<double>(kNumCompoundClasses);
  return m;
}

Metrics evaluate(const ModelSpec& spec, const ModelState& state,
                 const std::vector<EvalSample>& eval_set, const CompoundCatalog& catalog,
                 int threads) {
  if (eval_set.empty()) {
    throw std::invalid_argument("evaluate: empty evaluation set");
  }

  std::vector<std::size_t> truth(eval_set.size());
  std::vector<std::size_t> predicted(eval_set.size());

  auto score_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      truth[i] = eval_set[i].compound_class;
      const auto p = predict_basic(spec, state, eval_set[i].sample.image);
      predicted[i] = constrain_to_compound(p, catalog).class_index;
    }
  };

  if (threads <= 1 || eval_set.size() < 2) {
    score_range(0, eval_set.size());
  } else {
    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(threads), eval_set.size());
    std::vector<std::thread> workers;
    const std::size_t chunk = (eval_set.size() + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(begin + chunk, eval_set.size());
      if (begin >= end) break;
      workers.emplace_back(score_range, begin, end);
    }
    for (std::thread& w : workers) w.join();
  }

  return compute_metrics(truth, predicted);
}

std::string metrics_to_json(const Metrics& metrics, const CompoundCatalog& catalog) {
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t c = 0; c < kNumCompoundClasses; ++c) {
    classes.push_back({
        {"name", catalog[c].name},
        {"f1", metrics.per_class_f1[c]},
        {"precision", metrics.precision[c]},
        {"recall", metrics.recall[c]},
        {"support", metrics.support[c]},
        {"zero_support", metrics.zero_support[c]},
    });
  }
  nlohmann::json confusion = nlohmann::json::array();
  for (const auto& row : metrics.confusion) {
    confusion.push_back(row);
  }
  const nlohmann::json j{
      {"macro_f1", metrics.macro_f1},
      {"classes", classes},
      {"confusion", confusion},
  };
  return j.dump(2);
}

}  // namespace curricomp
