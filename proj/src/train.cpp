#include "curricomp/train.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "curricomp/manifest.hpp"

namespace curricomp {

namespace {

Tensor stack_images(const std::vector<Sample>& batch) {
  const Tensor& first = batch.front().image;
  Tensor out = Tensor::zeros({batch.size(), first.dim(0), first.dim(1), first.dim(2)});
  const std::size_t stride = first.numel();
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!batch[i].image.same_shape(first)) {
      throw std::invalid_argument("train: mixed image shapes in one batch");
    }
    std::copy(batch[i].image.data.begin(), batch[i].image.data.end(),
              out.data.begin() + static_cast<std::ptrdiff_t>(i * stride));
  }
  return out;
}

Tensor stack_labels(const std::vector<Sample>& batch) {
  Tensor out = Tensor::zeros({batch.size(), kNumBasicClasses});
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (std::size_t c = 0; c < kNumBasicClasses; ++c) {
      out.data[i * kNumBasicClasses + c] = batch[i].label[c];
    }
  }
  return out;
}

}  // namespace

void write_train_log(const std::filesystem::path& path, const TrainLog& log, bool append) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("train log: cannot open " + path.string());
  for (const TrainLogEntry& e : log.entries) {
    const nlohmann::json j{
        {"epoch", e.epoch},
        {"stage", e.stage},
        {"compound_proportion", e.compound_proportion},
        {"mean_loss", e.mean_loss},
        {"val_macro_f1", e.val_macro_f1},
    };
    out << j.dump() << "\n";
  }
  if (!out) throw std::runtime_error("train log: write failed for " + path.string());
}

std::vector<EvalSample> build_compound_eval_set(const TrainingPools& val_pools,
                                                const CompoundCatalog& catalog,
                                                const CompoundSource& source,
                                                std::size_t per_class, std::uint64_t seed) {
  std::vector<EvalSample> eval_set;
  const RngStream root = RngStream(seed).substream("compound-eval");

  const double synth_total = source.mixup_weight + source.cutmix_weight;
  if (synth_total > 0.0) {
    const double mixup_share = source.mixup_weight / synth_total;
    SynthParams params = source.synth;
    params.restrict_to_catalog = true;  // evaluation classes are catalog entries by definition
    for (std::size_t k = 0; k < catalog.size(); ++k) {
      if (!val_pools.basic.has_class(catalog[k].first) ||
          !val_pools.basic.has_class(catalog[k].second)) {
        std::cerr << "eval set: skipping '" << catalog[k].name
                  << "' (constituent class missing from validation pool)\n";
        continue;
      }
      // Restrict the pool to this entry's constituents so the drawn catalog
      // entry is exactly k.
      BasicPool entry_pool;
      entry_pool.samples = val_pools.basic.samples;
      entry_pool.by_class[static_cast<std::size_t>(catalog[k].first)] =
          val_pools.basic.by_class[static_cast<std::size_t>(catalog[k].first)];
      entry_pool.by_class[static_cast<std::size_t>(catalog[k].second)] =
          val_pools.basic.by_class[static_cast<std::size_t>(catalog[k].second)];

      for (std::size_t i = 0; i < per_class; ++i) {
        RngStream rng = root.substream(k, i);
        const SynthMethod method =
            rng.uniform() < mixup_share ? SynthMethod::Mixup : SynthMethod::Cutmix;
        EvalSample item;
        item.sample = synthesize_compound(entry_pool, catalog, method, params, rng);
        item.compound_class = k;
        eval_set.push_back(std::move(item));
      }
    }
  }

  for (const Sample& s : val_pools.natural) {
    eval_set.push_back({s, compound_truth_index(s.label, catalog)});
  }

  if (eval_set.empty()) {
    throw std::runtime_error("eval set: no compound evaluation samples could be built");
  }
  return eval_set;
}

TrainOutcome train(const RunConfig& config, const std::vector<Sample>& dataset,
                   const std::optional<std::filesystem::path>& resume_from) {
  validate(config);
  const CompoundCatalog& catalog = default_catalog();

  std::vector<Sample> usable = filter_neutral(dataset);
  if (usable.empty()) {
    throw std::runtime_error("train: training pool is empty after neutral filtering");
  }

  const DatasetSplit data_split = split(usable, config.data.val_fraction, config.seed);
  TrainingPools train_pools = TrainingPools::build(gather(usable, data_split.train));
  TrainingPools val_pools = TrainingPools::build(gather(usable, data_split.val));

  const CompoundSource source =
      make_compound_source(config.mixup.enabled, config.cutmix.enabled, config.natural_weight,
                           !train_pools.natural.empty(), config.synth_params());
  const std::vector<EvalSample> eval_set = build_compound_eval_set(
      val_pools, catalog, source, config.eval_per_class, config.seed);

  TrainOutcome outcome;
  outcome.spec = config.model_spec();
  int start_epoch = 1;
  bool resuming = false;

  if (resume_from) {
    const Checkpoint ckpt = load_checkpoint(*resume_from);
    if (!(ckpt.spec == outcome.spec)) {
      throw std::runtime_error("train: checkpoint architecture differs from the configured model");
    }
    outcome.state = ckpt.state;
    outcome.best_val_f1 = ckpt.meta.best_val_f1;
    outcome.best_epoch = ckpt.meta.best_epoch;
    start_epoch = ckpt.meta.epoch + 1;
    resuming = true;
  } else {
    outcome.state = init_state(outcome.spec, config.seed);
  }

  const std::filesystem::path out_dir(config.output_dir);
  std::filesystem::create_directories(out_dir);
  outcome.best_checkpoint = out_dir / "best.ckpt";
  outcome.last_checkpoint = out_dir / "last.ckpt";
  outcome.train_log_path = out_dir / "trainlog.jsonl";

  Optimizer optimizer(config.optimizer, outcome.state);
  StageIterator iterator(config.schedule(), train_pools, catalog, source, config.batch_size,
                         config.batches_per_epoch, config.seed, start_epoch);
  const RngStream aug_root = RngStream(config.seed).substream("augment");

  const int total_epochs = config.schedule().total_epochs();
  if (start_epoch > total_epochs) {
    throw std::runtime_error("train: checkpoint is already at the end of the schedule");
  }

  int current_epoch = 0;
  int current_stage = 0;
  double current_proportion = 0.0;
  double loss_sum = 0.0;
  std::size_t batches_in_epoch = 0;
  auto epoch_start = std::chrono::steady_clock::now();

  auto finish_epoch = [&]() {
    const double mean_loss = batches_in_epoch > 0 ? loss_sum / batches_in_epoch : 0.0;
    const Metrics metrics =
        evaluate(outcome.spec, outcome.state, eval_set, catalog, config.threads);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                      epoch_start)
                            .count();
    outcome.log.entries.push_back({current_epoch, current_stage, current_proportion, mean_loss,
                                   metrics.macro_f1, wall});

    if (metrics.macro_f1 > outcome.best_val_f1 || outcome.best_epoch == 0) {
      outcome.best_val_f1 = metrics.macro_f1;
      outcome.best_epoch = current_epoch;
      save_checkpoint(outcome.best_checkpoint, outcome.spec, outcome.state,
                      {current_epoch, metrics.macro_f1, outcome.best_val_f1, outcome.best_epoch});
    }
    save_checkpoint(outcome.last_checkpoint, outcome.spec, outcome.state,
                    {current_epoch, metrics.macro_f1, outcome.best_val_f1, outcome.best_epoch});

    std::cerr << "epoch " << current_epoch << "/" << total_epochs << " stage " << current_stage
              << " prop " << current_proportion << " loss " << mean_loss << " val_macro_f1 "
              << metrics.macro_f1 << " (" << wall << "s)\n";
  };

  while (auto batch = iterator.next()) {
    if (batch->epoch != current_epoch) {
      if (current_epoch != 0) finish_epoch();
      current_epoch = batch->epoch;
      current_stage = batch->stage;
      current_proportion = batch->proportion;
      loss_sum = 0.0;
      batches_in_epoch = 0;
      epoch_start = std::chrono::steady_clock::now();
      if (config.reset_optimizer_per_stage && !outcome.log.entries.empty() &&
          outcome.log.entries.back().stage != current_stage) {
        optimizer.reset();
      }
    }

    // Single-expression augmentation applies to basic-source samples only.
    for (std::size_t slot = 0; slot < batch->samples.size(); ++slot) {
      Sample& s = batch->samples[slot];
      if (s.source != SampleSource::Basic) continue;
      RngStream rng = aug_root.substream(static_cast<std::uint64_t>(batch->epoch),
                                         static_cast<std::uint64_t>(batch->batch_in_epoch), slot);
      s = basic_augment(s, rng, config.augment);
      if (config.augment.cutout_size > 0) {
        s.image = cutout(s.image, rng, config.augment.cutout_size);
      }
    }

    const Tensor images = stack_images(batch->samples);
    const Tensor labels = stack_labels(batch->samples);
    double loss = 0.0;
    try {
      const Gradients grads = backward(outcome.spec, outcome.state, images, labels, &loss);
      if (!std::isfinite(loss)) throw std::runtime_error("loss diverged (non-finite)");
      optimizer.step(outcome.state, grads);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("train: aborted at epoch " + std::to_string(batch->epoch) +
                               ", batch " + std::to_string(batch->batch_in_epoch) + ": " +
                               e.what());
    }
    loss_sum += loss;
    ++batches_in_epoch;
  }
  if (current_epoch != 0) finish_epoch();

  write_train_log(outcome.train_log_path, outcome.log, resuming);
  return outcome;
}

}  // namespace curricomp
