#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hdgmv/errors.hpp"

namespace hdgmv {

// Substream seeding. A stream key is derived from (master_seed, labels...) by
// folding each label into the running key with the SplitMix64 finalizer; the
// same (master_seed, labels) always yields the same stream, and streams with
// different labels are statistically independent. The engine is mt19937_64,
// whose raw output is fully specified by the standard; all variate transforms
// below are hand-rolled over raw 64-bit words so every draw is reproducible
// bit-for-bit across platforms and thread schedules.

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> stream_labels;

  SeedSpec with(std::uint64_t label) const {
    SeedSpec out = *this;
    out.stream_labels.push_back(label);
    return out;
  }

  std::uint64_t stream_key() const {
    std::uint64_t key = detail::splitmix64(master_seed);
    for (std::uint64_t label : stream_labels) key = detail::splitmix64(key ^ label);
    return key;
  }
};

// One PRNG substream. Not safe for concurrent use; give each worker its own.
class RngStream {
 public:
  explicit RngStream(const SeedSpec& seed) : engine_(seed.stream_key()) {}
  explicit RngStream(std::uint64_t raw_key) : engine_(raw_key) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1): 53 random bits scaled by 2^-53.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1); safe as a log/ratio argument.
  double uniform01_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via the Marsaglia polar method (pairs are cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    have_spare_ = true;
    return u * factor;
  }

  // Chi-squared with integer degrees of freedom as a sum of squared normals.
  double chi_squared(int df) {
    if (df < 1) throw DomainError("chi_squared: df must be >= 1");
    double sum = 0.0;
    for (int i = 0; i < df; ++i) {
      const double z = normal();
      sum += z * z;
    }
    return sum;
  }

  // Student-t with integer degrees of freedom: N(0,1) / sqrt(chi2_df / df).
  double student_t(int df) {
    const double z = normal();
    return z / std::sqrt(chi_squared(df) / static_cast<double>(df));
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hdgmv
