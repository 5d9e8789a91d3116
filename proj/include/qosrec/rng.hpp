#ifndef QOSREC_RNG_HPP_
#define QOSREC_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace qosrec {

/// Seeded random source with a pinned output sequence.
///
/// mt19937_64 itself is fully specified by the standard, but the standard
/// distributions and std::shuffle are not, so bounded draws and shuffling
/// are implemented here. Every randomized operation in the library is a
/// pure function of (inputs, seed) through this class.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    // rejection sampling, keeps the draw exactly uniform
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  /// k distinct indices drawn from [0, n), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

inline std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  // partial Fisher-Yates: first k slots end up with the sample
  for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
    std::swap(pool[i], pool[i + below(n - i)]);
  }
  pool.resize(k < n ? k : n);
  return pool;
}

}  // namespace qosrec

#endif  // QOSREC_RNG_HPP_
