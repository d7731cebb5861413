#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dcrnn {

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream));
}

// Deterministic random source. The mt19937_64 engine output is fully
// specified by the standard; the distributions below are written out by hand
// so streams are reproducible across standard libraries. Draw count is
// tracked so the generator state can be checkpointed as (seed, count).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next_u64() {
    ++count_;
    return engine_();
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller. The second value of each pair is
  // discarded so the full state is exactly (seed, draw count).
  double gaussian() {
    double u1 = uniform();
    const double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    return r * std::cos(theta);
  }

  double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

  // Derive an independent child stream; does not consume state.
  Rng stream(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draw_count() const { return count_; }

  // Rebuild a generator at a checkpointed (seed, count) position.
  static Rng restore(std::uint64_t seed, std::uint64_t count) {
    Rng r(seed);
    r.engine_.discard(count);
    r.count_ = count;
    return r;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t count_ = 0;
  std::mt19937_64 engine_;
};

// Fisher-Yates shuffle of the index range [0, n).
template <typename IndexVec>
void shuffle_indices(IndexVec& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_below(i));
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace dcrnn
