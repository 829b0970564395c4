#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace curricomp {

/// Seeded deterministic random stream with named, independent sub-streams.
///
/// Sub-streams are derived from the stream's own seed (never from engine
/// state), so draws on one sub-stream cannot perturb another. All
/// distributions are implemented by hand on top of mt19937_64 so that the
/// draw sequences are identical across standard-library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  /// Derived stream for a named augmentation/component.
  RngStream substream(std::string_view name) const {
    return RngStream(mix(seed_ ^ fnv1a(name)));
  }

  /// Derived stream addressed by indices, e.g. (epoch, batch, slot).
  RngStream substream(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    std::uint64_t s = seed_;
    s = mix(s ^ mix(a + 0x100));
    s = mix(s ^ mix(b + 0x200));
    s = mix(s ^ mix(c + 0x300));
    return RngStream(s);
  }

  RngStream substream(std::string_view name, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0) const {
    return substream(name).substream(a, b, c);
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Box-Muller; consumes two uniforms per pair, caches the spare.
  double normal(double mean = 0.0, double sigma = 1.0) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + sigma * spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return mean + sigma * r * std::cos(theta);
  }

  /// Fisher-Yates; stable across platforms unlike std::shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {  // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char ch : s) {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace curricomp
