#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "curricomp/inference.hpp"
#include "curricomp/loss.hpp"
#include "curricomp/metrics.hpp"
#include "curricomp/rng.hpp"
#include "curricomp/sweep.hpp"
#include "curricomp/synthetic.hpp"
#include "curricomp/train.hpp"
#include "test_util.hpp"

using namespace curricomp;
using curricomp::testing::TempDir;

namespace {

// Naive double-loop oracle for the multi-label BCE, kept deliberately
// independent of the library implementation.
double naive_bce(const Tensor& p, const Tensor& y) {
  const std::size_t rows = p.dim(0);
  const std::size_t cols = p.dim(1);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double pi = p.at2(i, c);
      const double yi = y.at2(i, c);
      total += yi * std::log(pi) + (1.0 - yi) * std::log(1.0 - pi);
    }
  }
  return -total / static_cast<double>(rows);
}

// Brute-force constrained-inference oracle: enumerate all catalog sums.
std::size_t brute_force_compound(const std::array<double, 6>& p, const CompoundCatalog& catalog) {
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    const double score = p[static_cast<std::size_t>(catalog[k].first)] +
                         p[static_cast<std::size_t>(catalog[k].second)];
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

RunConfig tiny_run_config(const TempDir& dir) {
  RunConfig config;
  config.seed = 9;
  config.resolution = 16;
  config.hidden = {16};
  config.batch_size = 16;
  config.epoch_dis = {1};
  config.compound_prop = {0.0};
  config.eval_per_class = 5;
  config.augment.cutout_size = 4;
  config.output_dir = (dir.path() / "run").string();
  return config;
}

std::vector<Sample> tiny_dataset() {
  SyntheticConfig config;
  config.n_per_class = 10;
  config.resolution = 16;
  config.seed = 4;
  return generate_synthetic(config);
}

}  // namespace

TEST_CASE("bce_loss is exactly zero when p equals binary labels") {
  Tensor p = Tensor::zeros({2, 6});
  Tensor y = Tensor::zeros({2, 6});
  p.at2(0, 2) = 1.0;
  y.at2(0, 2) = 1.0;
  p.at2(1, 5) = 1.0;
  y.at2(1, 5) = 1.0;
  CHECK(bce_loss(p, y) == 0.0);
}

TEST_CASE("bce_loss of uniform 0.5 predictions is 6 ln 2 per sample") {
  Tensor p = Tensor::full({3, 6}, 0.5);
  Tensor y = Tensor::zeros({3, 6});
  RngStream rng(2);
  for (double& v : y.data) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
  // 6*ln(2), frozen from an independent high-precision evaluation.
  CHECK(std::abs(bce_loss(p, y) - 4.1588830833596719) <= 1e-12);
}

TEST_CASE("bce_loss matches the naive double-loop oracle to 1e-10") {
  RngStream rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rows = static_cast<std::size_t>(rng.uniform_int(1, 16));
    Tensor p = Tensor::zeros({rows, 6});
    Tensor y = Tensor::zeros({rows, 6});
    for (double& v : p.data) v = rng.uniform(0.001, 0.999);
    for (double& v : y.data) v = rng.uniform();
    CHECK(std::abs(bce_loss(p, y) - naive_bce(p, y)) <= 1e-10);
  }
}

TEST_CASE("bce_loss validates inputs") {
  CHECK_THROWS_AS(bce_loss(Tensor::full({1, 6}, 1.5), Tensor::zeros({1, 6})),
                  std::runtime_error);
  CHECK_THROWS_AS(bce_loss(Tensor::full({1, 6}, 0.5), Tensor::full({1, 6}, 2.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(bce_loss(Tensor::full({1, 6}, 0.5), Tensor::zeros({2, 6})),
                  std::invalid_argument);
}

TEST_CASE("constrain_to_compound reproduces the worked example") {
  const std::array<double, 6> p = {0.1, 0.05, 0.7, 0.02, 0.2, 0.6};
  const CompoundDecision d = constrain_to_compound(p, default_catalog());

  // Hand-summed scores, cross-checked against the brute-force oracle below.
  CHECK(d.scores[0] == doctest::Approx(1.30).epsilon(1e-12));  // Fearfully Surprised
  CHECK(d.scores[1] == doctest::Approx(0.62).epsilon(1e-12));  // Happily Surprised
  CHECK(d.scores[2] == doctest::Approx(0.80).epsilon(1e-12));  // Sadly Surprised
  CHECK(d.scores[3] == doctest::Approx(0.65).epsilon(1e-12));  // Disgustedly Surprised
  CHECK(d.scores[4] == doctest::Approx(0.70).epsilon(1e-12));  // Angrily Surprised
  CHECK(d.scores[5] == doctest::Approx(0.90).epsilon(1e-12));  // Sadly Fearful
  CHECK(d.scores[6] == doctest::Approx(0.30).epsilon(1e-12));  // Sadly Angry
  CHECK(d.class_index == 0);
  CHECK(default_catalog()[d.class_index].name == "Fearfully Surprised");
  CHECK(d.class_index == brute_force_compound(p, default_catalog()));
}

TEST_CASE("constrain_to_compound ties resolve to the lowest catalog index") {
  const std::array<double, 6> p = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  const CompoundDecision d = constrain_to_compound(p, default_catalog());
  for (const double s : d.scores) CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.class_index == 0);
}

TEST_CASE("a pure surprise vector can only win a *-surprised class") {
  const std::array<double, 6> p = {0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
  const CompoundDecision d = constrain_to_compound(p, default_catalog());
  CHECK(d.class_index <= 4);       // the five *-Surprised entries
  CHECK(d.scores[5] == 0.0);       // Sadly Fearful cannot win
  CHECK(d.scores[6] == 0.0);       // Sadly Angry cannot win
}

TEST_CASE("constrain_to_compound matches the brute-force oracle on random vectors") {
  RngStream rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    std::array<double, 6> p{};
    for (double& v : p) v = rng.uniform();
    CHECK(constrain_to_compound(p, default_catalog()).class_index ==
          brute_force_compound(p, default_catalog()));
  }
}

TEST_CASE("argmax is invariant under strictly increasing affine maps") {
  RngStream rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, 6> p{};
    for (double& v : p) v = rng.uniform();
    const double a = rng.uniform(0.05, 1.0);
    const double b = rng.uniform(0.0, 1.0 - a);
    std::array<double, 6> mapped{};
    for (std::size_t i = 0; i < 6; ++i) mapped[i] = a * p[i] + b;

    const CompoundDecision base = constrain_to_compound(p, default_catalog());
    const CompoundDecision shifted = constrain_to_compound(mapped, default_catalog());
    CHECK(base.class_index == shifted.class_index);
    for (std::size_t k = 0; k < 7; ++k) {
      CHECK(shifted.scores[k] == doctest::Approx(a * base.scores[k] + 2.0 * b).epsilon(1e-12));
    }
  }
}

TEST_CASE("compound_truth_index maps union and soft labels to the right entry") {
  LabelVector fear_surprise{};
  fear_surprise[static_cast<int>(BasicClass::Fear)] = 1.0;
  fear_surprise[static_cast<int>(BasicClass::Surprise)] = 1.0;
  CHECK(compound_truth_index(fear_surprise, default_catalog()) == 0);

  LabelVector soft{};
  soft[static_cast<int>(BasicClass::Sadness)] = 0.1;
  soft[static_cast<int>(BasicClass::Anger)] = 0.9;
  CHECK(compound_truth_index(soft, default_catalog()) == 6);  // Sadly Angry
}

TEST_CASE("compute_metrics: perfect predictions give macro F1 of 1") {
  std::vector<std::size_t> truth, pred;
  for (std::size_t c = 0; c < 7; ++c) {
    for (int i = 0; i < 3; ++i) {
      truth.push_back(c);
      pred.push_back(c);
    }
  }
  const Metrics m = compute_metrics(truth, pred);
  CHECK(m.macro_f1 == 1.0);
  for (std::size_t c = 0; c < 7; ++c) {
    CHECK(m.per_class_f1[c] == 1.0);
    CHECK_FALSE(m.zero_support[c]);
  }
}

TEST_CASE("a zero-support class contributes F1 = 0 and is flagged") {
  std::vector<std::size_t> truth, pred;
  for (std::size_t c = 0; c < 6; ++c) {  // class 6 never appears
    truth.push_back(c);
    pred.push_back(c);
  }
  const Metrics m = compute_metrics(truth, pred);
  CHECK(m.zero_support[6]);
  CHECK(m.per_class_f1[6] == 0.0);
  CHECK(m.macro_f1 == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("compute_metrics matches an independent confusion-matrix oracle") {
  // 20-sample hand-built prediction/label set.
  const std::vector<std::size_t> truth = {0, 0, 0, 1, 1, 2, 2, 2, 3, 3,
                                          4, 4, 5, 5, 5, 6, 6, 0, 1, 4};
  const std::vector<std::size_t> pred = {0, 1, 0, 1, 1, 2, 3, 2, 3, 3,
                                         4, 6, 5, 5, 0, 6, 6, 0, 0, 4};
  const Metrics m = compute_metrics(truth, pred);

  double f1_sum = 0.0;
  for (std::size_t c = 0; c < 7; ++c) {
    int tp = 0, fp = 0, fn = 0, support = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth[i] == c) {
        ++support;
        if (pred[i] == c) ++tp; else ++fn;
      } else if (pred[i] == c) {
        ++fp;
      }
    }
    const double precision = tp + fp > 0 ? double(tp) / (tp + fp) : 0.0;
    const double recall = tp + fn > 0 ? double(tp) / (tp + fn) : 0.0;
    const double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    f1_sum += f1;
    CHECK(m.precision[c] == doctest::Approx(precision).epsilon(1e-15));
    CHECK(m.recall[c] == doctest::Approx(recall).epsilon(1e-15));
    CHECK(m.per_class_f1[c] == doctest::Approx(f1).epsilon(1e-15));
    CHECK(m.support[c] == support);

    int row_sum = 0;
    for (std::size_t o = 0; o < 7; ++o) row_sum += m.confusion[c][o];
    CHECK(row_sum == support);
  }
  // Macro F1 is exactly the mean of the per-class F1s.
  CHECK(m.macro_f1 == f1_sum / 7.0);
}

TEST_CASE("evaluate rejects an empty evaluation set") {
  const ModelSpec spec = make_mlp_spec(4, 4, 3, {8});
  const ModelState state = init_state(spec, 1);
  CHECK_THROWS_AS(evaluate(spec, state, {}, default_catalog()), std::invalid_argument);
}

TEST_CASE("metrics JSON carries exactly 7 per-class entries") {
  std::vector<std::size_t> truth(7), pred(7);
  for (std::size_t c = 0; c < 7; ++c) truth[c] = pred[c] = c;
  const Metrics m = compute_metrics(truth, pred);
  const auto j = nlohmann::json::parse(metrics_to_json(m, default_catalog()));
  CHECK(j.at("classes").size() == 7);
  CHECK(j.at("confusion").size() == 7);
  CHECK(j.at("macro_f1").get<double>() == 1.0);
}

TEST_CASE("fresh-model loss sits near 6 ln 2 per sample") {
  const auto dataset = tiny_dataset();
  const ModelSpec spec = make_mlp_spec(16, 16, 3, {16});
  const ModelState state = init_state(spec, 123);

  Tensor batch = Tensor::zeros({dataset.size(), 16, 16, 3});
  Tensor labels = Tensor::zeros({dataset.size(), 6});
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    std::copy(dataset[i].image.data.begin(), dataset[i].image.data.end(),
              batch.data.begin() + static_cast<std::ptrdiff_t>(i * 768));
    for (std::size_t c = 0; c < 6; ++c) labels.at2(i, c) = dataset[i].label[c];
  }
  const double loss = bce_loss(forward(spec, state, batch), labels);
  CHECK(loss == doctest::Approx(4.1588830833596719).epsilon(0.10));
}

TEST_CASE("train smoke: one epoch on the tiny dataset emits checkpoints and a log") {
  TempDir dir("smoke");
  const RunConfig config = tiny_run_config(dir);
  const auto dataset = tiny_dataset();

  const TrainOutcome outcome = train(config, dataset);
  REQUIRE(outcome.log.entries.size() == 1);
  CHECK(outcome.log.entries[0].epoch == 1);
  CHECK(outcome.log.entries[0].compound_proportion == 0.0);
  CHECK(outcome.log.entries[0].mean_loss > 0.0);
  CHECK(std::filesystem::exists(outcome.best_checkpoint));
  CHECK(std::filesystem::exists(outcome.last_checkpoint));
  CHECK(std::filesystem::exists(outcome.train_log_path));

  const Checkpoint ckpt = load_checkpoint(outcome.best_checkpoint);
  CHECK(ckpt.spec == outcome.spec);
  CHECK(ckpt.meta.epoch == 1);

  // JSONL log: parseable records without timing fields.
  std::ifstream in(outcome.train_log_path);
  std::string line;
  REQUIRE(std::getline(in, line));
  const auto j = nlohmann::json::parse(line);
  CHECK(j.contains("epoch"));
  CHECK(j.contains("mean_loss"));
  CHECK(j.contains("val_macro_f1"));
  CHECK_FALSE(j.contains("wall_time"));
}

TEST_CASE("train is deterministic given the seed") {
  TempDir dir1("det1");
  TempDir dir2("det2");
  RunConfig c1 = tiny_run_config(dir1);
  c1.epoch_dis = {1, 1};
  c1.compound_prop = {0.0, 0.5};
  RunConfig c2 = c1;
  c2.output_dir = (dir2.path() / "run").string();

  const auto dataset = tiny_dataset();
  const TrainOutcome a = train(c1, dataset);
  const TrainOutcome b = train(c2, dataset);

  REQUIRE(a.log.entries.size() == b.log.entries.size());
  for (std::size_t i = 0; i < a.log.entries.size(); ++i) {
    CHECK(a.log.entries[i].mean_loss == b.log.entries[i].mean_loss);
    CHECK(a.log.entries[i].val_macro_f1 == b.log.entries[i].val_macro_f1);
  }
  CHECK(states_equal(a.state, b.state));
}

TEST_CASE("train aborts with epoch/batch context on non-finite numerics") {
  TempDir dir("diverge");
  RunConfig config = tiny_run_config(dir);

  auto dataset = tiny_dataset();
  for (Sample& s : dataset) s.image.data[0] = std::numeric_limits<double>::quiet_NaN();

  try {
    train(config, dataset);
    FAIL("expected a numeric abort");
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    CHECK(what.find("epoch 1") != std::string::npos);
    CHECK(what.find("batch 0") != std::string::npos);
    CHECK(what.find("layer") != std::string::npos);
  }
}

TEST_CASE("train rejects an all-neutral dataset") {
  TempDir dir("neutral");
  const RunConfig config = tiny_run_config(dir);
  auto dataset = tiny_dataset();
  for (Sample& s : dataset) s.neutral = 1.0;
  CHECK_THROWS_AS(train(config, dataset), std::runtime_error);
}

TEST_CASE("sweep formats schedules like the grid notation") {
  CHECK(format_schedule({5, 5, 3, 3}) == "[5, 5, 3, 3]");
  CHECK(format_schedule({15}) == "[15]");
  CHECK(format_proportions({0.0, 0.2, 0.4, 1.0}) == "[0, 0.2, 0.4, 1]");
  CHECK(format_proportions({0.0, 1.0}) == "[0, 1]");
}

TEST_CASE("sweep: duplicate experiments share results, failures don't stop the run") {
  TempDir dir("sweep");
  SweepConfig config;
  config.common = tiny_run_config(dir);
  config.common.epoch_dis = {1, 1};
  config.common.compound_prop = {0.0, 1.0};
  config.common.output_dir = (dir.path() / "sweep_runs").string();
  config.output_csv = (dir.path() / "sweep.csv").string();

  SweepExperiment exp1;
  exp1.exp_id = 1;
  exp1.epoch_dis = {1, 1};
  exp1.compound_prop = {0.0, 1.0};
  SweepExperiment exp2 = exp1;
  exp2.exp_id = 2;
  SweepExperiment broken = exp1;  // no synthesis route and no natural pool
  broken.exp_id = 3;
  broken.mixup = false;
  broken.cutmix = false;
  config.experiments = {exp1, exp2, broken};

  const auto rows = sweep(config, tiny_dataset());
  REQUIRE(rows.size() == 3);
  CHECK_FALSE(rows[0].failed);
  CHECK_FALSE(rows[1].failed);
  CHECK(rows[0].macro_f1 == rows[1].macro_f1);  // same seed, same config
  CHECK(rows[2].failed);
  CHECK(std::isnan(rows[2].macro_f1));

  write_sweep_csv(config.output_csv, rows);
  std::ifstream in(config.output_csv);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "exp,epoch_dis,compound_prop,mixup,cutmix,macro_f1");
  std::string row1;
  REQUIRE(std::getline(in, row1));
  CHECK(row1.find("\"[1, 1]\"") != std::string::npos);
  CHECK(row1.find("\"[0, 1]\"") != std::string::npos);
}

TEST_CASE("train resumes from a checkpoint and extends the log") {
  TempDir dir("resume");
  RunConfig config = tiny_run_config(dir);
  config.epoch_dis = {2};
  config.compound_prop = {0.0};

  const auto dataset = tiny_dataset();
  const TrainOutcome full = train(config, dataset);
  REQUIRE(full.log.entries.size() == 2);

  // Fresh run of epoch 1 only, then resume to epoch 2.
  TempDir dir2("resume2");
  RunConfig first = config;
  first.epoch_dis = {1};
  first.output_dir = (dir2.path() / "run").string();
  const TrainOutcome one = train(first, dataset);

  RunConfig second = config;
  second.output_dir = first.output_dir;
  const TrainOutcome resumed = train(second, dataset, one.last_checkpoint);
  REQUIRE(resumed.log.entries.size() == 1);
  CHECK(resumed.log.entries[0].epoch == 2);

  // The resumed parameters differ from where it started.
  CHECK_FALSE(states_equal(resumed.state, one.state));
}
