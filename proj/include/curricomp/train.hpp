#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "curricomp/checkpoint.hpp"
#include "curricomp/config.hpp"
#include "curricomp/curriculum.hpp"
#include "curricomp/metrics.hpp"
#include "curricomp/model.hpp"

namespace curricomp {

struct TrainLogEntry {
  int epoch = 1;
  int stage = 1;
  double compound_proportion = 0.0;
  double mean_loss = 0.0;
  double val_macro_f1 = 0.0;
  double wall_time_sec = 0.0;  // diagnostics only; not serialized (timings
                               // would break run-to-run reproducibility)
};

struct TrainLog {
  std::vector<TrainLogEntry> entries;
};

/// JSON-lines, one record per epoch. Appends when `append` is set (resume).
void write_train_log(const std::filesystem::path& path, const TrainLog& log,
                     bool append = false);

/// Builds the fixed compound validation set: for every realizable catalog
/// entry, `per_class` samples synthesized from the validation basic pool
/// (method drawn per the source weights), plus any natural compound
/// validation samples with their label-mass ground truth. Deterministic
/// given the seed.
std::vector<EvalSample> build_compound_eval_set(const TrainingPools& val_pools,
                                                const CompoundCatalog& catalog,
                                                const CompoundSource& source,
                                                std::size_t per_class, std::uint64_t seed);

struct TrainOutcome {
  ModelSpec spec;
  ModelState state;  // final-epoch parameters
  TrainLog log;
  double best_val_f1 = 0.0;
  int best_epoch = 0;
  std::filesystem::path best_checkpoint;
  std::filesystem::path last_checkpoint;
  std::filesystem::path train_log_path;
};

/// Runs the staged curriculum over the given dataset: neutral filtering,
/// stratified split, per-epoch batch stream with the scheduled compound
/// proportion, single-expression augmentation on basic samples only,
/// BCE backward/step, per-epoch validation macro-F1, best/last checkpoints
/// and a JSONL train log under config.output_dir. Aborts with epoch/batch
/// context if the loss goes non-finite.
TrainOutcome train(const RunConfig& config, const std::vector<Sample>& dataset,
                   const std::optional<std::filesystem::path>& resume_from = std::nullopt);

}  // namespace curricomp
