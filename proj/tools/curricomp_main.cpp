#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "curricomp/checkpoint.hpp"
#include "curricomp/config.hpp"
#include "curricomp/grad_check.hpp"
#include "curricomp/image.hpp"
#include "curricomp/inference.hpp"
#include "curricomp/manifest.hpp"
#include "curricomp/metrics.hpp"
#include "curricomp/sweep.hpp"
#include "curricomp/synthetic.hpp"
#include "curricomp/train.hpp"

namespace {

using namespace curricomp;

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string config_path;
};

RunConfig resolve_run_config(const GlobalFlags& flags) {
  RunConfig config = flags.config_path.empty() ? RunConfig{} : load_run_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.threads) config.threads = *flags.threads;
  return config;
}

std::vector<Sample> load_training_data(const RunConfig& config) {
  validate_paths(config);
  const std::filesystem::path manifest(config.data.train_manifest);
  const std::filesystem::path root = config.data.image_root.empty()
                                         ? manifest.parent_path()
                                         : std::filesystem::path(config.data.image_root);
  return load_manifest(manifest, root, config.resolution);
}

int cmd_gen_data(const GlobalFlags& flags, const std::string& out_dir, std::size_t n_per_class,
                 std::size_t resolution, double noise_sigma) {
  SyntheticConfig config;
  config.n_per_class = n_per_class;
  config.resolution = resolution;
  config.noise_sigma = noise_sigma;
  config.seed = flags.seed.value_or(0);

  const auto manifest = generate_synthetic_to_disk(config, out_dir);
  std::cout << "wrote " << kNumBasicClasses * config.n_per_class << " images ("
            << config.n_per_class << " per class, " << resolution << "x" << resolution
            << ") and " << manifest.string() << "\n";
  return 0;
}

int cmd_train(const GlobalFlags& flags, const std::string& out_override,
              const std::string& manifest_override, const std::string& image_root_override,
              const std::string& resume) {
  RunConfig config = resolve_run_config(flags);
  if (!out_override.empty()) config.output_dir = out_override;
  if (!manifest_override.empty()) config.data.train_manifest = manifest_override;
  if (!image_root_override.empty()) config.data.image_root = image_root_override;

  validate(config);
  const std::vector<Sample> dataset = load_training_data(config);
  const std::optional<std::filesystem::path> resume_from =
      resume.empty() ? std::nullopt : std::optional<std::filesystem::path>(resume);

  const TrainOutcome outcome = train(config, dataset, resume_from);
  std::cout << "best val macro_f1 " << outcome.best_val_f1 << " at epoch " << outcome.best_epoch
            << "\n"
            << "best checkpoint: " << outcome.best_checkpoint.string() << "\n"
            << "last checkpoint: " << outcome.last_checkpoint.string() << "\n"
            << "train log: " << outcome.train_log_path.string() << "\n";
  return 0;
}

int cmd_eval(const GlobalFlags& flags, const std::string& ckpt_path,
             const std::string& manifest_path, const std::string& image_root,
             const std::string& out_json) {
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const std::filesystem::path manifest(manifest_path);
  const std::filesystem::path root =
      image_root.empty() ? manifest.parent_path() : std::filesystem::path(image_root);

  std::vector<Sample> samples =
      load_manifest(manifest, root, ckpt.spec.input_height);
  const std::size_t before = samples.size();
  samples = filter_neutral(std::move(samples));
  if (samples.size() != before) {
    std::cerr << "eval: dropped " << before - samples.size() << " neutral rows\n";
  }
  if (samples.empty()) throw std::runtime_error("eval: no usable samples in manifest");

  const CompoundCatalog& catalog = default_catalog();
  std::vector<EvalSample> eval_set;
  eval_set.reserve(samples.size());
  for (Sample& s : samples) {
    const std::size_t truth = compound_truth_index(s.label, catalog);
    eval_set.push_back({std::move(s), truth});
  }

  const Metrics metrics =
      evaluate(ckpt.spec, ckpt.state, eval_set, catalog, flags.threads.value_or(1));
  const std::string json_text = metrics_to_json(metrics, catalog);
  if (!out_json.empty()) {
    std::ofstream out(out_json);
    if (!out) throw std::runtime_error("eval: cannot write " + out_json);
    out << json_text << "\n";
  }
  std::cout << json_text << "\n";
  return 0;
}

int cmd_predict(const std::string& ckpt_path, const std::string& image_path) {
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  Tensor image = load_image(image_path);
  image = bilinear_resize(image, ckpt.spec.input_height, ckpt.spec.input_width);

  const auto p = predict_basic(ckpt.spec, ckpt.state, image);
  const CompoundCatalog& catalog = default_catalog();
  const CompoundDecision decision = constrain_to_compound(p, catalog);

  std::cout << "basic probabilities:\n";
  for (std::size_t c = 0; c < kNumBasicClasses; ++c) {
    std::printf("  %-10s %.4f\n", basic_class_name(static_cast<BasicClass>(c)).c_str(), p[c]);
  }
  std::cout << "compound scores:\n";
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    std::printf("  %-22s %.4f\n", catalog[k].name.c_str(), decision.scores[k]);
  }
  std::cout << "prediction: " << catalog[decision.class_index].name << " (class "
            << decision.class_index << ")\n";
  return 0;
}

int cmd_sweep(const GlobalFlags& flags, const std::string& sweep_config_path,
              const std::string& out_override, const std::string& manifest_override,
              const std::string& image_root_override) {
  SweepConfig config = load_sweep_config(sweep_config_path);
  if (flags.seed) config.common.seed = *flags.seed;
  if (flags.threads) config.common.threads = *flags.threads;
  if (!manifest_override.empty()) config.common.data.train_manifest = manifest_override;
  if (!image_root_override.empty()) config.common.data.image_root = image_root_override;
  if (!out_override.empty()) config.output_csv = out_override;

  const std::vector<Sample> dataset = load_training_data(config.common);
  const std::vector<SweepRow> rows = sweep(config, dataset);
  write_sweep_csv(config.output_csv, rows);
  std::cout << sweep_csv_text(rows) << "sweep table written to " << config.output_csv << "\n";

  for (const SweepRow& row : rows) {
    if (row.failed) return 1;
  }
  return 0;
}

int cmd_grad_check(const GlobalFlags& flags, std::size_t n_models, double eps, double tol,
                   std::size_t max_params) {
  RngStream root(flags.seed.value_or(0));
  double worst = 0.0;
  bool all_pass = true;

  for (std::size_t i = 0; i < n_models; ++i) {
    RngStream rng = root.substream("grad-check-model", i);
    const std::size_t side = static_cast<std::size_t>(rng.uniform_int(3, 6));
    const std::size_t hidden = static_cast<std::size_t>(rng.uniform_int(4, 16));
    const std::size_t rows = static_cast<std::size_t>(rng.uniform_int(2, 6));

    const ModelSpec spec = make_mlp_spec(side, side, 3, {hidden});
    const ModelState state = init_state(spec, rng.next_u64());

    Tensor batch = Tensor::zeros({rows, side, side, 3});
    for (double& v : batch.data) v = rng.uniform();
    Tensor labels = Tensor::zeros({rows, kNumBasicClasses});
    for (double& v : labels.data) v = rng.bernoulli(0.5) ? 1.0 : 0.0;

    const GradCheckReport report =
        grad_check(spec, state, batch, labels, eps, tol, max_params, rng.next_u64());
    worst = std::max(worst, report.max_rel_err);
    all_pass = all_pass && report.pass;
    std::printf("model %2zu: %5zu params checked, max_rel_err %.3e -> %s\n", i + 1,
                report.params_checked, report.max_rel_err, report.pass ? "pass" : "FAIL");
  }

  std::printf("grad-check %s (worst max_rel_err %.3e over %zu models, tol %.1e)\n",
              all_pass ? "PASS" : "FAIL", worst, n_models, tol);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curricomp: curriculum training and catalog-constrained evaluation "
               "for compound expression recognition"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  std::uint64_t seed_value = 0;
  int threads_value = 1;
  auto* seed_opt = app.add_option("--seed", seed_value, "Seed for every stochastic component");
  auto* threads_opt = app.add_option("--threads", threads_value, "Threads for parallel sections");
  app.add_option("--config", flags.config_path, "JSON run config (flags override file values)");

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate the synthetic glyph dataset");
  std::string gen_out = "data/synth";
  std::size_t gen_n = 200, gen_res = 32;
  double gen_noise = 0.02;
  gen->add_option("--out", gen_out, "Output directory");
  gen->add_option("--n-per-class", gen_n, "Images per basic class")
      ->check(CLI::PositiveNumber);
  gen->add_option("--resolution", gen_res, "Square image size (>= 16)");
  gen->add_option("--noise-sigma", gen_noise, "Additive Gaussian noise sigma");

  // train
  auto* tr = app.add_subcommand("train", "Run the staged curriculum training");
  std::string tr_out, tr_manifest, tr_root, tr_resume;
  tr->add_option("--out", tr_out, "Output directory (overrides config)");
  tr->add_option("--train-manifest", tr_manifest, "Training manifest CSV (overrides config)");
  tr->add_option("--image-root", tr_root, "Image root (overrides config)");
  tr->add_option("--resume", tr_resume, "Checkpoint to continue from");

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint on a manifest");
  std::string ev_ckpt, ev_manifest, ev_root, ev_out;
  ev->add_option("--ckpt", ev_ckpt, "Checkpoint file")->required();
  ev->add_option("--manifest", ev_manifest, "Evaluation manifest CSV")->required();
  ev->add_option("--image-root", ev_root, "Image root (default: manifest directory)");
  ev->add_option("--out", ev_out, "Write the metrics JSON here as well");

  // predict
  auto* pr = app.add_subcommand("predict", "Basic probabilities + compound decision for one image");
  std::string pr_ckpt, pr_image;
  pr->add_option("--ckpt", pr_ckpt, "Checkpoint file")->required();
  pr->add_option("--image", pr_image, "Image path (PPM)")->required();

  // sweep
  auto* sw = app.add_subcommand("sweep", "Train every experiment of an ablation grid");
  std::string sw_config, sw_out, sw_manifest, sw_root;
  sw->add_option("--config", sw_config, "Sweep config JSON")->required();
  sw->add_option("--out", sw_out, "Output CSV path (overrides config)");
  sw->add_option("--train-manifest", sw_manifest, "Training manifest CSV (overrides config)");
  sw->add_option("--image-root", sw_root, "Image root (overrides config)");

  // grad-check
  auto* gc = app.add_subcommand("grad-check", "Verify analytic gradients with central differences");
  std::size_t gc_models = 20, gc_max_params = 5000;
  double gc_eps = 1e-5, gc_tol = 1e-4;
  gc->add_option("--models", gc_models, "Number of random models");
  gc->add_option("--eps", gc_eps, "Finite-difference step");
  gc->add_option("--tol", gc_tol, "Max relative error to pass");
  gc->add_option("--max-params", gc_max_params, "Random parameter subset size (0 = all)");

  CLI11_PARSE(app, argc, argv);

  if (*seed_opt) flags.seed = seed_value;
  if (*threads_opt) flags.threads = threads_value;

  try {
    if (gen->parsed()) return cmd_gen_data(flags, gen_out, gen_n, gen_res, gen_noise);
    if (tr->parsed()) return cmd_train(flags, tr_out, tr_manifest, tr_root, tr_resume);
    if (ev->parsed()) return cmd_eval(flags, ev_ckpt, ev_manifest, ev_root, ev_out);
    if (pr->parsed()) return cmd_predict(pr_ckpt, pr_image);
    if (sw->parsed()) return cmd_sweep(flags, sw_config, sw_out, sw_manifest, sw_root);
    if (gc->parsed()) return cmd_grad_check(flags, gc_models, gc_eps, gc_tol, gc_max_params);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
