#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "curricomp/augment.hpp"
#include "curricomp/labels.hpp"

using namespace curricomp;

namespace {

Sample flat_sample(BasicClass c, double value, std::size_t side = 32) {
  Sample s;
  s.image = Tensor::full({side, side, 3}, value);
  s.label = one_hot(c);
  return s;
}

Sample patterned_sample(BasicClass c, std::size_t side = 16) {
  Sample s;
  s.image = Tensor::zeros({side, side, 3});
  for (std::size_t i = 0; i < s.image.numel(); ++i) {
    s.image.data[i] = static_cast<double>((i * 7) % 100) / 128.0 + 0.05;  // never 0.5
  }
  s.label = one_hot(c);
  return s;
}

}  // namespace

TEST_CASE("mixup with lambda 1 returns the first sample verbatim") {
  const Sample a = patterned_sample(BasicClass::Fear);
  const Sample b = patterned_sample(BasicClass::Surprise);
  for (const MixMode mode : {MixMode::Proportional, MixMode::Union}) {
    const Sample out = mixup(a, b, 1.0, mode);
    CHECK(out.image.data == a.image.data);
    CHECK(out.label == a.label);
    CHECK(out.source == a.source);
  }
}

TEST_CASE("mixup blends images at the midpoint") {
  const Sample a = flat_sample(BasicClass::Anger, 0.2);
  const Sample b = flat_sample(BasicClass::Disgust, 0.6);
  const Sample out = mixup(a, b, 0.5, MixMode::Proportional);
  for (const double v : out.image.data) CHECK(v == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("mixup lambda 0.1 of fear+surprise gives the 0.1/0.9 soft label") {
  const Sample a = flat_sample(BasicClass::Fear, 0.3);
  const Sample b = flat_sample(BasicClass::Surprise, 0.7);
  const Sample out = mixup(a, b, 0.1, MixMode::Proportional);
  CHECK(out.label[static_cast<int>(BasicClass::Fear)] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(out.label[static_cast<int>(BasicClass::Surprise)] == doctest::Approx(0.9).epsilon(1e-15));
  for (std::size_t c = 0; c < kNumBasicClasses; ++c) {
    if (c != static_cast<std::size_t>(BasicClass::Fear) &&
        c != static_cast<std::size_t>(BasicClass::Surprise)) {
      CHECK(out.label[c] == 0.0);
    }
  }
  CHECK(out.source == SampleSource::SynthesizedCompound);
}

TEST_CASE("mixup union mode emits a binary two-hot label") {
  const Sample a = flat_sample(BasicClass::Sadness, 0.2);
  const Sample b = flat_sample(BasicClass::Anger, 0.8);
  const Sample out = mixup(a, b, 0.1, MixMode::Union);
  int ones = 0;
  for (const double v : out.label) {
    CHECK((v == 0.0 || v == 1.0));
    if (v == 1.0) ++ones;
  }
  CHECK(ones == 2);
  CHECK(out.label[static_cast<int>(BasicClass::Sadness)] == 1.0);
  CHECK(out.label[static_cast<int>(BasicClass::Anger)] == 1.0);
}

TEST_CASE("mixup label linearity and swap identity in proportional mode") {
  Sample a = flat_sample(BasicClass::Fear, 0.3);
  Sample b = flat_sample(BasicClass::Surprise, 0.7);
  a.label = {0.1, 0.0, 0.8, 0.0, 0.1, 0.0};
  b.label = {0.0, 0.3, 0.0, 0.0, 0.0, 0.7};

  RngStream rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const double l = rng.uniform();
    const Sample ab = mixup(a, b, l, MixMode::Proportional);
    const Sample swapped = mixup(b, a, l, MixMode::Proportional);
    const Sample complement = mixup(a, b, 1.0 - l, MixMode::Proportional);
    for (std::size_t c = 0; c < kNumBasicClasses; ++c) {
      CHECK(ab.label[c] == doctest::Approx(l * a.label[c] + (1 - l) * b.label[c]).epsilon(1e-12));
      // Swapping the operands at the same lambda, or complementing lambda
      // with the same operands, both reconstruct y_a + y_b.
      CHECK(ab.label[c] + swapped.label[c] ==
            doctest::Approx(a.label[c] + b.label[c]).epsilon(1e-12));
      CHECK(ab.label[c] + complement.label[c] ==
            doctest::Approx(a.label[c] + b.label[c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("mixup validates its inputs") {
  const Sample a = flat_sample(BasicClass::Fear, 0.3);
  Sample small = a;
  small.image = Tensor::full({8, 8, 3}, 0.1);
  CHECK_THROWS_AS(mixup(a, small, 0.5, MixMode::Proportional), std::invalid_argument);
  CHECK_THROWS_AS(mixup(a, a, 1.5, MixMode::Proportional), std::invalid_argument);
}

TEST_CASE("mixing two same-class samples keeps the basic source tag") {
  const Sample a = flat_sample(BasicClass::Happiness, 0.2);
  const Sample b = flat_sample(BasicClass::Happiness, 0.8);
  CHECK(mixup(a, b, 0.5, MixMode::Proportional).source == SampleSource::Basic);
}

TEST_CASE("cutmix with lambda 1 is an exact identity with empty patch") {
  const Sample a = patterned_sample(BasicClass::Fear, 32);
  const Sample b = patterned_sample(BasicClass::Surprise, 32);
  RngStream rng(3);
  const CutmixResult r = cutmix(a, b, 1.0, rng, MixMode::Proportional);
  CHECK(r.lambda_eff == 1.0);
  CHECK(r.patch.area() == 0);
  CHECK(r.sample.image.data == a.image.data);
  CHECK(r.sample.label == a.label);
}

TEST_CASE("cutmix lambda 0.75 on 32x32 at a central anchor: 16x16 patch, pixel-count oracle") {
  const Sample a = flat_sample(BasicClass::Fear, 0.25);
  const Sample b = flat_sample(BasicClass::Surprise, 0.75);
  const CutmixResult r = cutmix_at(a, b, 0.75, 16, 16, MixMode::Proportional);

  CHECK(r.patch.x1 - r.patch.x0 == 16);
  CHECK(r.patch.y1 - r.patch.y0 == 16);
  CHECK(r.lambda_eff == doctest::Approx(0.75).epsilon(1e-15));

  // Independent oracle: count output pixels carrying img_b's value.
  std::size_t from_b = 0;
  for (std::size_t i = 0; i < r.sample.image.numel(); i += 3) {
    if (r.sample.image.data[i] == 0.75) ++from_b;
  }
  CHECK(from_b == 16 * 16);
  CHECK(1.0 - static_cast<double>(from_b) / (32.0 * 32.0) ==
        doctest::Approx(r.lambda_eff).epsilon(1e-15));

  CHECK(r.sample.label[static_cast<int>(BasicClass::Fear)] ==
        doctest::Approx(0.75).epsilon(1e-12));
  CHECK(r.sample.label[static_cast<int>(BasicClass::Surprise)] ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("cutmix provenance: every pixel comes from a or b, sums conserved") {
  const Sample a = flat_sample(BasicClass::Fear, 0.25);
  const Sample b = flat_sample(BasicClass::Surprise, 0.75);
  RngStream rng(99);

  for (int draw = 0; draw < 100; ++draw) {
    const double lambda = rng.uniform();
    RngStream draw_rng = rng.substream("draw", static_cast<std::uint64_t>(draw));
    const CutmixResult r = cutmix(a, b, lambda, draw_rng, MixMode::Union);

    std::size_t from_b = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < r.sample.image.numel(); i += 3) {
      const double v = r.sample.image.data[i];
      const bool is_a = v == 0.25;
      const bool is_b = v == 0.75;
      CHECK((is_a || is_b));  // no blending anywhere
      if (is_b) ++from_b;
      sum += v;
    }
    // lambda-hat equals 1 - (pixels sourced from b) / (H*W), exactly.
    CHECK(r.lambda_eff == 1.0 - static_cast<double>(from_b) / (32.0 * 32.0));
    CHECK(from_b == r.patch.area());
    // Conservation: sum = a outside patch + b inside patch.
    const double expected_sum = 0.25 * (32.0 * 32.0 - static_cast<double>(from_b)) +
                                0.75 * static_cast<double>(from_b);
    CHECK(sum == doctest::Approx(expected_sum).epsilon(1e-12));
  }
}

TEST_CASE("cutout: zero hole is identity, full hole is all mid-gray") {
  const Sample s = patterned_sample(BasicClass::Anger, 16);
  RngStream rng(5);

  const Tensor same = cutout(s.image, rng, 0);
  CHECK(same.data == s.image.data);

  const Tensor gray = cutout(s.image, rng, 16);
  for (const double v : gray.data) CHECK(v == 0.5);

  CHECK_THROWS_AS(cutout(s.image, rng, 17), std::invalid_argument);
}

TEST_CASE("cutout changes exactly hole_area pixels") {
  const Sample s = patterned_sample(BasicClass::Anger, 16);  // no pixel equals 0.5
  RngStream rng(8);
  for (int draw = 0; draw < 20; ++draw) {
    const Tensor out = cutout(s.image, rng, 5);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < out.numel(); i += 3) {
      if (out.data[i] != s.image.data[i]) ++changed;
    }
    CHECK(changed == 25);
  }
}

TEST_CASE("flip is an involution and basic_augment with neutral config is identity") {
  const Sample s = patterned_sample(BasicClass::Fear, 9);
  CHECK(flip_horizontal(flip_horizontal(s.image)).data == s.image.data);

  AugmentConfig config;
  config.flip_p = 0.0;
  config.jitter_strength = 0.0;
  config.crop_scale = 1.0;
  RngStream rng(1);
  const Sample out = basic_augment(s, rng, config);
  CHECK(out.image.data == s.image.data);
  CHECK(out.label == s.label);
}

TEST_CASE("basic_augment keeps pixels in range, label untouched, deterministic") {
  Sample s = patterned_sample(BasicClass::Sadness, 16);
  for (double& v : s.image.data) v = std::min(v, 1.0);

  AugmentConfig config;  // defaults: flip 0.5, jitter 0.1, crop 0.9
  for (int trial = 0; trial < 30; ++trial) {
    RngStream rng = RngStream(77).substream("trial", static_cast<std::uint64_t>(trial));
    const Sample out = basic_augment(s, rng, config);
    CHECK(out.label == s.label);
    CHECK(out.image.shape == s.image.shape);
    for (const double v : out.image.data) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }

    RngStream rng2 = RngStream(77).substream("trial", static_cast<std::uint64_t>(trial));
    const Sample repeat = basic_augment(s, rng2, config);
    CHECK(repeat.image.data == out.image.data);
  }
}

TEST_CASE("basic_augment validates its config") {
  const Sample s = patterned_sample(BasicClass::Fear, 8);
  RngStream rng(1);
  AugmentConfig bad;
  bad.flip_p = 1.5;
  CHECK_THROWS_AS(basic_augment(s, rng, bad), std::invalid_argument);
  bad = AugmentConfig{};
  bad.crop_scale = 0.0;
  CHECK_THROWS_AS(basic_augment(s, rng, bad), std::invalid_argument);
}

TEST_CASE("rng substreams are independent of each other's draw history") {
  RngStream root(123);
  RngStream a1 = root.substream("alpha");
  const double first = a1.uniform();

  RngStream root2(123);
  RngStream b = root2.substream("beta");
  for (int i = 0; i < 17; ++i) b.uniform();  // burn draws on another stream
  RngStream a2 = root2.substream("alpha");
  CHECK(a2.uniform() == first);

  // Indexed substreams: distinct indices give distinct streams.
  RngStream s0 = root.substream("x", 0);
  RngStream s1 = root.substream("x", 1);
  CHECK(s0.uniform() != s1.uniform());
}

TEST_CASE("all augmentations preserve the image shape") {
  const Sample a = patterned_sample(BasicClass::Fear, 16);
  const Sample b = patterned_sample(BasicClass::Surprise, 16);
  RngStream rng(4);

  CHECK(mixup(a, b, 0.3, MixMode::Union).image.shape == a.image.shape);
  CHECK(cutmix(a, b, 0.5, rng, MixMode::Union).sample.image.shape == a.image.shape);
  CHECK(cutout(a.image, rng, 4).shape == a.image.shape);
  CHECK(basic_augment(a, rng, AugmentConfig{}).image.shape == a.image.shape);
}
