#include "curricomp/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curricomp {

namespace {

// Beta(alpha, alpha) via two gamma draws (Johnk's method is fine at small alpha).
double draw_beta(double alpha, RngStream& rng) {
  // Marsaglia-Tsang needs alpha >= 1; boost small alpha with the power trick.
  auto draw_gamma = [&rng](double a) {
    double boost = 1.0;
    if (a < 1.0) {
      boost = std::pow(rng.uniform(), 1.0 / a);
      a += 1.0;
    }
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = rng.normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = rng.uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
        return boost * d * v;
      }
    }
  };
  const double ga = draw_gamma(alpha);
  const double gb = draw_gamma(alpha);
  const double sum = ga + gb;
  return sum > 0.0 ? ga / sum : 0.5;
}

std::size_t pick(const std::vector<std::size_t>& v, RngStream& rng) {
  return v[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(v.size()) - 1))];
}

}  // namespace

CurriculumSchedule CurriculumSchedule::from_arrays(const std::vector<int>& epoch_dis,
                                                   const std::vector<double>& compound_prop) {
  if (epoch_dis.size() != compound_prop.size()) {
    throw std::invalid_argument("schedule: epoch_dis and compound_prop lengths differ (" +
                                std::to_string(epoch_dis.size()) + " vs " +
                                std::to_string(compound_prop.size()) + ")");
  }
  CurriculumSchedule schedule;
  for (std::size_t i = 0; i < epoch_dis.size(); ++i) {
    schedule.stages.push_back({epoch_dis[i], compound_prop[i]});
  }
  validate(schedule);
  return schedule;
}

int CurriculumSchedule::total_epochs() const {
  int total = 0;
  for (const StageSpec& s : stages) total += s.epochs;
  return total;
}

void validate(const CurriculumSchedule& schedule) {
  if (schedule.stages.empty()) {
    throw std::invalid_argument("schedule: must contain at least one stage");
  }
  for (const StageSpec& s : schedule.stages) {
    if (s.epochs < 1) throw std::invalid_argument("schedule: stage epochs must be >= 1");
    if (!(s.compound_proportion >= 0.0 && s.compound_proportion <= 1.0)) {
      throw std::invalid_argument("schedule: compound proportion must lie in [0,1]");
    }
  }
}

std::vector<EpochPlanEntry> plan(const CurriculumSchedule& schedule) {
  validate(schedule);
  std::vector<EpochPlanEntry> entries;
  int epoch = 1;
  for (std::size_t stage = 0; stage < schedule.stages.size(); ++stage) {
    const StageSpec& s = schedule.stages[stage];
    for (int e = 0; e < s.epochs; ++e) {
      entries.push_back({epoch++, static_cast<int>(stage) + 1, s.compound_proportion});
    }
  }
  return entries;
}

CompoundSource make_compound_source(bool mixup_enabled, bool cutmix_enabled,
                                    double natural_weight, bool has_natural_pool,
                                    const SynthParams& synth) {
  CompoundSource source;
  source.synth = synth;

  double wn = has_natural_pool ? std::clamp(natural_weight, 0.0, 1.0) : 0.0;
  const int synth_routes = (mixup_enabled ? 1 : 0) + (cutmix_enabled ? 1 : 0);
  if (synth_routes == 0) {
    if (!has_natural_pool) {
      throw std::invalid_argument(
          "compound source: mixup and cutmix disabled and no natural compound pool");
    }
    wn = 1.0;
  }
  const double per_synth = synth_routes > 0 ? (1.0 - wn) / synth_routes : 0.0;
  source.mixup_weight = mixup_enabled ? per_synth : 0.0;
  source.cutmix_weight = cutmix_enabled ? per_synth : 0.0;
  source.natural_weight = wn;
  return source;
}

BasicPool BasicPool::build(std::vector<Sample> samples) {
  BasicPool pool;
  pool.samples = std::move(samples);
  for (std::size_t i = 0; i < pool.samples.size(); ++i) {
    pool.by_class[dominant_class(pool.samples[i].label)].push_back(i);
  }
  return pool;
}

TrainingPools TrainingPools::build(std::vector<Sample> samples) {
  TrainingPools pools;
  std::vector<Sample> basic;
  for (Sample& s : samples) {
    if (s.source == SampleSource::Basic) {
      basic.push_back(std::move(s));
    } else {
      pools.natural.push_back(std::move(s));
    }
  }
  pools.basic = BasicPool::build(std::move(basic));
  return pools;
}

Sample synthesize_compound(const BasicPool& pool, const CompoundCatalog& catalog,
                           SynthMethod method, const SynthParams& params, RngStream& rng) {
  std::size_t class_a = 0;
  std::size_t class_b = 0;

  if (params.restrict_to_catalog) {
    std::vector<std::size_t> realizable;
    for (std::size_t k = 0; k < catalog.size(); ++k) {
      if (pool.has_class(catalog[k].first) && pool.has_class(catalog[k].second)) {
        realizable.push_back(k);
      }
    }
    if (realizable.empty()) {
      throw std::runtime_error(
          "synthesize_compound: no catalog entry has both constituent classes in the pool");
    }
    const std::size_t k = pick(realizable, rng);
    class_a = static_cast<std::size_t>(catalog[k].first);
    class_b = static_cast<std::size_t>(catalog[k].second);
  } else {
    std::vector<std::size_t> available;
    for (std::size_t c = 0; c < kNumBasicClasses; ++c) {
      if (!pool.by_class[c].empty()) available.push_back(c);
    }
    if (available.size() < 2) {
      throw std::runtime_error("synthesize_compound: need samples from at least 2 classes");
    }
    class_a = pick(available, rng);
    do {
      class_b = pick(available, rng);
    } while (class_b == class_a);
  }

  const Sample& a = pool.samples[pick(pool.by_class[class_a], rng)];
  const Sample& b = pool.samples[pick(pool.by_class[class_b], rng)];

  Sample out;
  switch (method) {
    case SynthMethod::Mixup: {
      const double lambda = params.mixup_beta
                                ? draw_beta(params.mixup_beta_alpha, rng)
                                : params.mixup_lambda;
      out = mixup(a, b, lambda, params.mode);
      break;
    }
    case SynthMethod::Cutmix: {
      out = cutmix(a, b, params.cutmix_lambda, rng, params.mode).sample;
      break;
    }
  }
  out.source = SampleSource::SynthesizedCompound;
  return out;
}

std::vector<Sample> sample_batch(const TrainingPools& pools, const CompoundCatalog& catalog,
                                 const CompoundSource& source, double proportion,
                                 std::size_t batch_size, RngStream& rng) {
  if (batch_size < 1) throw std::invalid_argument("sample_batch: batch_size must be >= 1");
  if (!(proportion >= 0.0 && proportion <= 1.0)) {
    throw std::invalid_argument("sample_batch: proportion must lie in [0,1]");
  }

  const auto n_compound = static_cast<std::size_t>(
      std::lround(proportion * static_cast<double>(batch_size)));
  const std::size_t n_basic = batch_size - n_compound;

  if (n_basic > pools.basic.samples.size()) {
    throw std::runtime_error("sample_batch: basic pool has " +
                             std::to_string(pools.basic.samples.size()) +
                             " samples but the batch needs " + std::to_string(n_basic));
  }

  std::vector<Sample> batch;
  batch.reserve(batch_size);

  // Basic slots: distinct indices via a partial Fisher-Yates.
  if (n_basic > 0) {
    std::vector<std::size_t> idx(pools.basic.samples.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < n_basic; ++i) {
      const auto j = static_cast<std::size_t>(
          rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(idx.size()) - 1));
      std::swap(idx[i], idx[j]);
      batch.push_back(pools.basic.samples[idx[i]]);
    }
  }

  // Compound slots: route each slot up front, then synthesize on per-slot
  // sub-streams so slots could run in parallel without changing the output.
  std::vector<int> routes(n_compound);
  for (std::size_t s = 0; s < n_compound; ++s) {
    const double u = rng.uniform();
    if (u < source.natural_weight) {
      routes[s] = 2;
    } else if (u < source.natural_weight + source.mixup_weight) {
      routes[s] = 0;
    } else {
      routes[s] = 1;
    }
  }
  for (std::size_t s = 0; s < n_compound; ++s) {
    RngStream slot_rng = rng.substream("slot", s);
    if (routes[s] == 2) {
      if (pools.natural.empty()) {
        throw std::runtime_error("sample_batch: natural compound source selected but pool is empty");
      }
      const auto j = static_cast<std::size_t>(
          slot_rng.uniform_int(0, static_cast<std::int64_t>(pools.natural.size()) - 1));
      batch.push_back(pools.natural[j]);
    } else {
      const SynthMethod method = routes[s] == 0 ? SynthMethod::Mixup : SynthMethod::Cutmix;
      batch.push_back(synthesize_compound(pools.basic, catalog, method, source.synth, slot_rng));
    }
  }

  rng.shuffle(batch);
  return batch;
}

StageIterator::StageIterator(const CurriculumSchedule& schedule, const TrainingPools& pools,
                             const CompoundCatalog& catalog, const CompoundSource& source,
                             std::size_t batch_size, std::size_t batches_per_epoch,
                             std::uint64_t seed, int start_epoch)
    : pools_(pools),
      catalog_(catalog),
      source_(source),
      plan_(plan(schedule)),
      batch_size_(batch_size),
      batches_per_epoch_(batches_per_epoch),
      root_(RngStream(seed).substream("stage-iterator")),
      epoch_cursor_(0) {
  if (batch_size_ < 1) throw std::invalid_argument("stage_iterator: batch_size must be >= 1");
  if (batches_per_epoch_ == 0) {
    const std::size_t pool = !pools_.basic.samples.empty() ? pools_.basic.samples.size()
                                                           : pools_.natural.size();
    if (pool == 0) throw std::invalid_argument("stage_iterator: both training pools are empty");
    batches_per_epoch_ = (pool + batch_size_ - 1) / batch_size_;
  }
  while (epoch_cursor_ < plan_.size() && plan_[epoch_cursor_].epoch < start_epoch) {
    ++epoch_cursor_;
  }
}

std::optional<StageIterator::Batch> StageIterator::next() {
  if (epoch_cursor_ >= plan_.size()) return std::nullopt;
  const EpochPlanEntry& entry = plan_[epoch_cursor_];

  RngStream batch_rng = root_.substream("batch", static_cast<std::uint64_t>(entry.epoch),
                                        static_cast<std::uint64_t>(batch_cursor_));
  Batch out;
  out.epoch = entry.epoch;
  out.stage = entry.stage;
  out.proportion = entry.proportion;
  out.batch_in_epoch = static_cast<int>(batch_cursor_);
  out.samples = sample_batch(pools_, catalog_, source_, entry.proportion, batch_size_, batch_rng);

  if (++batch_cursor_ >= batches_per_epoch_) {
    batch_cursor_ = 0;
    ++epoch_cursor_;
  }
  return out;
}

}  // namespace curricomp
