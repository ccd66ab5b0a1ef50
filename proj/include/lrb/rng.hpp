#pragma once
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace lrb {

// SplitMix64 generator.  Chosen over <random> engines because the output
// stream must be bit-identical across standard libraries (the harness
// promises byte-identical CSVs for a given config+seed).  Substreams are
// derived by finalizing (seed, tag), so e.g. instance generation and
// trajectory noise never share state even under adjacent integer seeds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Named substream `tag` of `seed`; decorrelated for adjacent seeds/tags.
  static Rng stream(std::uint64_t seed, std::uint64_t tag) {
    return Rng(mix(mix(seed + 0x9E3779B97F4A7C15ull) + tag));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in {0,...,n-1}.
  int uniform_int(int n) {
    int k = static_cast<int>(uniform01() * n);
    return k >= n ? n - 1 : k;
  }

  // Standard normal via Box-Muller (pair cached).  std::normal_distribution
  // is implementation-defined, which would break cross-platform determinism.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Sampler for a fixed finite distribution; inverse-CDF over cumulative sums.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const std::vector<double>& w) : cum_(w) {
    double acc = 0.0;
    for (double& c : cum_) {
      acc += c;
      c = acc;
    }
    if (acc > 0.0)
      for (double& c : cum_) c /= acc;
    if (!cum_.empty()) cum_.back() = 1.0;
  }
  int draw(Rng& rng) const {
    const double u = rng.uniform01();
    int lo = 0, hi = static_cast<int>(cum_.size()) - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (u < cum_[mid])
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }

 private:
  std::vector<double> cum_;
};

}  // namespace lrb
