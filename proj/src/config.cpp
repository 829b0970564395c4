#include "curricomp/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace curricomp {

namespace {

using nlohmann::json;

OptimizerKind optimizer_kind_from_string(const std::string& s) {
  if (s == "sgd") return OptimizerKind::Sgd;
  if (s == "adam") return OptimizerKind::Adam;
  throw std::invalid_argument("config: unknown optimizer kind '" + s + "'");
}

std::string optimizer_kind_to_string(OptimizerKind k) {
  return k == OptimizerKind::Sgd ? "sgd" : "adam";
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

CurriculumSchedule RunConfig::schedule() const {
  return CurriculumSchedule::from_arrays(epoch_dis, compound_prop);
}

SynthParams RunConfig::synth_params() const {
  SynthParams params;
  params.mixup_lambda = mixup.lambda;
  params.mixup_beta = mixup.beta;
  params.mixup_beta_alpha = mixup.beta_alpha;
  params.cutmix_lambda = cutmix.lambda;
  params.mode = mix_mode;
  params.restrict_to_catalog = restrict_to_catalog;
  return params;
}

ModelSpec RunConfig::model_spec() const {
  return make_mlp_spec(resolution, resolution, 3, hidden, kNumBasicClasses);
}

void validate(const RunConfig& config) {
  if (config.epoch_dis.size() != config.compound_prop.size()) {
    throw std::invalid_argument("config: epoch_dis and compound_prop must have equal length (" +
                                std::to_string(config.epoch_dis.size()) + " vs " +
                                std::to_string(config.compound_prop.size()) + ")");
  }
  validate(config.schedule());
  validate(config.optimizer);
  validate_for_training(config.model_spec());
  if (config.batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
  if (config.resolution < 1) throw std::invalid_argument("config: resolution must be >= 1");
  if (config.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  if (!(config.data.val_fraction > 0.0 && config.data.val_fraction < 1.0)) {
    throw std::invalid_argument("config: val_fraction must lie in (0,1)");
  }
  if (config.mixup.lambda < 0.0 || config.mixup.lambda > 1.0) {
    throw std::invalid_argument("config: mixup lambda must lie in [0,1]");
  }
  if (config.cutmix.lambda < 0.0 || config.cutmix.lambda > 1.0) {
    throw std::invalid_argument("config: cutmix lambda must lie in [0,1]");
  }
  if (config.eval_per_class < 1) {
    throw std::invalid_argument("config: eval_per_class must be >= 1");
  }
}

void validate_paths(const RunConfig& config) {
  validate(config);
  if (config.data.train_manifest.empty()) {
    throw std::invalid_argument("config: data.train_manifest is required");
  }
  if (!std::filesystem::exists(config.data.train_manifest)) {
    throw std::invalid_argument("config: train manifest '" + config.data.train_manifest +
                                "' does not exist");
  }
  if (!config.data.image_root.empty() && !std::filesystem::exists(config.data.image_root)) {
    throw std::invalid_argument("config: image_root '" + config.data.image_root +
                                "' does not exist");
  }
}

RunConfig run_config_from_json_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: cannot parse " + origin + ": " + e.what());
  }

  RunConfig c;
  try {
    read_if(j, "seed", c.seed);
    read_if(j, "threads", c.threads);
    read_if(j, "resolution", c.resolution);
    read_if(j, "batch_size", c.batch_size);
    read_if(j, "batches_per_epoch", c.batches_per_epoch);
    read_if(j, "epoch_dis", c.epoch_dis);
    read_if(j, "compound_prop", c.compound_prop);
    read_if(j, "natural_weight", c.natural_weight);
    read_if(j, "restrict_to_catalog", c.restrict_to_catalog);
    read_if(j, "reset_optimizer_per_stage", c.reset_optimizer_per_stage);
    read_if(j, "eval_per_class", c.eval_per_class);
    read_if(j, "output_dir", c.output_dir);

    if (j.contains("model")) {
      read_if(j.at("model"), "hidden", c.hidden);
    }
    if (j.contains("optimizer")) {
      const json& o = j.at("optimizer");
      if (o.contains("kind")) c.optimizer.kind = optimizer_kind_from_string(o.at("kind"));
      read_if(o, "learning_rate", c.optimizer.learning_rate);
      read_if(o, "momentum", c.optimizer.momentum);
      read_if(o, "beta1", c.optimizer.beta1);
      read_if(o, "beta2", c.optimizer.beta2);
      read_if(o, "eps", c.optimizer.eps);
      read_if(o, "weight_decay", c.optimizer.weight_decay);
    }
    if (j.contains("mixup")) {
      const json& m = j.at("mixup");
      read_if(m, "enabled", c.mixup.enabled);
      read_if(m, "lambda", c.mixup.lambda);
      read_if(m, "beta", c.mixup.beta);
      read_if(m, "beta_alpha", c.mixup.beta_alpha);
    }
    if (j.contains("cutmix")) {
      const json& m = j.at("cutmix");
      read_if(m, "enabled", c.cutmix.enabled);
      read_if(m, "lambda", c.cutmix.lambda);
    }
    if (j.contains("mix_mode")) {
      c.mix_mode = mix_mode_from_string(j.at("mix_mode").get<std::string>());
    }
    if (j.contains("augment")) {
      const json& a = j.at("augment");
      read_if(a, "flip_p", c.augment.flip_p);
      read_if(a, "jitter_strength", c.augment.jitter_strength);
      read_if(a, "crop_scale", c.augment.crop_scale);
      read_if(a, "cutout_size", c.augment.cutout_size);
    }
    if (j.contains("data")) {
      const json& d = j.at("data");
      read_if(d, "train_manifest", c.data.train_manifest);
      read_if(d, "image_root", c.data.image_root);
      read_if(d, "val_fraction", c.data.val_fraction);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: bad value in " + origin + ": " + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return run_config_from_json_text(text, path.string());
}

std::string run_config_to_json_text(const RunConfig& c) {
  const json j{
      {"seed", c.seed},
      {"threads", c.threads},
      {"resolution", c.resolution},
      {"batch_size", c.batch_size},
      {"batches_per_epoch", c.batches_per_epoch},
      {"epoch_dis", c.epoch_dis},
      {"compound_prop", c.compound_prop},
      {"model", {{"hidden", c.hidden}}},
      {"optimizer",
       {{"kind", optimizer_kind_to_string(c.optimizer.kind)},
        {"learning_rate", c.optimizer.learning_rate},
        {"momentum", c.optimizer.momentum},
        {"beta1", c.optimizer.beta1},
        {"beta2", c.optimizer.beta2},
        {"eps", c.optimizer.eps},
        {"weight_decay", c.optimizer.weight_decay}}},
      {"mixup",
       {{"enabled", c.mixup.enabled},
        {"lambda", c.mixup.lambda},
        {"beta", c.mixup.beta},
        {"beta_alpha", c.mixup.beta_alpha}}},
      {"cutmix", {{"enabled", c.cutmix.enabled}, {"lambda", c.cutmix.lambda}}},
      {"mix_mode", mix_mode_name(c.mix_mode)},
      {"natural_weight", c.natural_weight},
      {"restrict_to_catalog", c.restrict_to_catalog},
      {"reset_optimizer_per_stage", c.reset_optimizer_per_stage},
      {"augment",
       {{"flip_p", c.augment.flip_p},
        {"jitter_strength", c.augment.jitter_strength},
        {"crop_scale", c.augment.crop_scale},
        {"cutout_size", c.augment.cutout_size}}},
      {"data",
       {{"train_manifest", c.data.train_manifest},
        {"image_root", c.data.image_root},
        {"val_fraction", c.data.val_fraction}}},
      {"eval_per_class", c.eval_per_class},
      {"output_dir", c.output_dir},
  };
  return j.dump(2);
}

}  // namespace curricomp
