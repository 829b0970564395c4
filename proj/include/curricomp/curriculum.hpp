#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "curricomp/augment.hpp"
#include "curricomp/labels.hpp"
#include "curricomp/rng.hpp"
#include "curricomp/sample.hpp"

namespace curricomp {

/// One curriculum stage: a block of epochs trained with a fixed fraction of
/// compound samples per batch.
struct StageSpec {
  int epochs = 1;
  double compound_proportion = 0.0;
};

struct CurriculumSchedule {
  std::vector<StageSpec> stages;

  static CurriculumSchedule from_arrays(const std::vector<int>& epoch_dis,
                                        const std::vector<double>& compound_prop);
  int total_epochs() const;
};

void validate(const CurriculumSchedule& schedule);

struct EpochPlanEntry {
  int epoch = 1;        // 1-based global epoch index
  int stage = 1;        // 1-based stage index
  double proportion = 0.0;
};

/// Expands a schedule into one entry per epoch; the proportion is constant
/// within a stage. Throws on an empty schedule.
std::vector<EpochPlanEntry> plan(const CurriculumSchedule& schedule);

/// Knobs for on-the-fly compound synthesis.
struct SynthParams {
  double mixup_lambda = 0.1;     // fixed blend weight: image = l*a + (1-l)*b
  bool mixup_beta = false;       // draw lambda ~ Beta(alpha, alpha) instead
  double mixup_beta_alpha = 0.2;
  double cutmix_lambda = 0.5;
  MixMode mode = MixMode::Union;
  bool restrict_to_catalog = true;  // false: any distinct class pair (ablation)
};

enum class SynthMethod { Mixup, Cutmix };

/// Where compound batch slots come from. Weights must sum to 1; a natural
/// weight > 0 requires a non-empty natural pool at sampling time.
struct CompoundSource {
  double mixup_weight = 0.5;
  double cutmix_weight = 0.5;
  double natural_weight = 0.0;
  SynthParams synth;
};

CompoundSource make_compound_source(bool mixup_enabled, bool cutmix_enabled,
                                    double natural_weight, bool has_natural_pool,
                                    const SynthParams& synth);

/// Basic pool indexed by dominant class for constituent lookup.
struct BasicPool {
  std::vector<Sample> samples;
  std::array<std::vector<std::size_t>, kNumBasicClasses> by_class;

  static BasicPool build(std::vector<Sample> samples);
  bool has_class(BasicClass c) const {
    return !by_class[static_cast<std::size_t>(c)].empty();
  }
};

/// Basic + natural-compound pools, partitioned by sample source.
struct TrainingPools {
  BasicPool basic;
  std::vector<Sample> natural;

  static TrainingPools build(std::vector<Sample> samples);
};

/// Draws one synthesized compound: a uniformly chosen realizable catalog
/// entry, one uniformly chosen sample per constituent class, mixed with the
/// requested method. The result's label support is contained in the chosen
/// entry's constituents and the sample is tagged SynthesizedCompound.
/// Throws std::runtime_error when no catalog entry is realizable.
Sample synthesize_compound(const BasicPool& pool, const CompoundCatalog& catalog,
                           SynthMethod method, const SynthParams& params, RngStream& rng);

/// Assembles one shuffled batch with exactly round(proportion * batch_size)
/// compound samples (synthesized or natural per `source`), the remainder
/// drawn without replacement from the basic pool.
std::vector<Sample> sample_batch(const TrainingPools& pools, const CompoundCatalog& catalog,
                                 const CompoundSource& source, double proportion,
                                 std::size_t batch_size, RngStream& rng);

/// Streams batches over the whole schedule: batches_per_epoch batches per
/// epoch at that epoch's compound proportion, compound samples synthesized
/// fresh per batch. Per-(epoch,batch) RNG sub-streams make the stream
/// deterministic and restartable at any epoch.
class StageIterator {
 public:
  struct Batch {
    int epoch = 1;
    int stage = 1;
    double proportion = 0.0;
    int batch_in_epoch = 0;  // 0-based
    std::vector<Sample> samples;
  };

  /// batches_per_epoch == 0 selects ceil(pool / batch_size) automatically.
  StageIterator(const CurriculumSchedule& schedule, const TrainingPools& pools,
                const CompoundCatalog& catalog, const CompoundSource& source,
                std::size_t batch_size, std::size_t batches_per_epoch, std::uint64_t seed,
                int start_epoch = 1);

  std::optional<Batch> next();

  const std::vector<EpochPlanEntry>& epoch_plan() const { return plan_; }
  std::size_t batches_per_epoch() const { return batches_per_epoch_; }

 private:
  const TrainingPools& pools_;
  const CompoundCatalog& catalog_;
  CompoundSource source_;
  std::vector<EpochPlanEntry> plan_;
  std::size_t batch_size_;
  std::size_t batches_per_epoch_;
  RngStream root_;
  std::size_t epoch_cursor_;  // index into plan_
  std::size_t batch_cursor_ = 0;
};

}  // namespace curricomp
