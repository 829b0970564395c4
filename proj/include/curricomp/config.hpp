#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "curricomp/augment.hpp"
#include "curricomp/curriculum.hpp"
#include "curricomp/optimizer.hpp"

namespace curricomp {

struct MixupSettings {
  bool enabled = true;
  double lambda = 0.1;
  bool beta = false;  // lambda ~ Beta(alpha, alpha) instead of fixed
  double beta_alpha = 0.2;
};

struct CutmixSettings {
  bool enabled = true;
  double lambda = 0.5;
};

struct DataSettings {
  std::string train_manifest;
  std::string image_root;  // defaults to the manifest's directory
  double val_fraction = 0.2;
};

/// Everything one experiment run needs; JSON-backed, flags override file
/// values. epoch_dis/compound_prop are the parallel schedule arrays.
struct RunConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  std::size_t resolution = 32;

  std::vector<std::size_t> hidden = {128, 64};
  OptimizerConfig optimizer;
  std::size_t batch_size = 64;
  std::size_t batches_per_epoch = 0;  // 0: ceil(pool / batch_size)

  std::vector<int> epoch_dis = {5, 5, 3, 3};
  std::vector<double> compound_prop = {0.0, 0.2, 0.4, 1.0};

  MixupSettings mixup;
  CutmixSettings cutmix;
  MixMode mix_mode = MixMode::Union;
  double natural_weight = 0.5;      // used only when a natural pool exists
  bool restrict_to_catalog = true;
  bool reset_optimizer_per_stage = false;

  AugmentConfig augment;
  DataSettings data;
  std::size_t eval_per_class = 50;  // synthesized compound eval samples per catalog entry

  std::string output_dir = "runs/default";

  CurriculumSchedule schedule() const;
  SynthParams synth_params() const;
  ModelSpec model_spec() const;
};

/// Structural validation (array lengths, ranges); does not touch the
/// filesystem.
void validate(const RunConfig& config);

/// validate() plus existence checks on every referenced input path.
void validate_paths(const RunConfig& config);

RunConfig run_config_from_json_text(const std::string& text, const std::string& origin);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json_text(const RunConfig& config);

}  // namespace curricomp
