#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace infousage {

/// Stream tags partition the random space of one replication, so adding draws
/// to one stage never shifts the draws of another.
enum class Stream : std::uint32_t {
  noise = 1,
  selection = 2,
  analyst = 3,
  query_noise = 4,
  labels = 5,
  design = 6,
};

/// One Philox4x32-10 block.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used to fold nested indices into one 64-bit index.
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

/// Counter-based generator keyed by (seed, index, stream).
///
/// Every replication constructs its own instance, so a replication's draws
/// depend only on its coordinates and never on scheduling. Satisfies
/// UniformRandomBitGenerator; the per-stream block counter is 32 bits wide
/// (2^32 blocks of 128 bits each).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t index, Stream stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform double on [0, 1) carrying 53 random bits.
  double uniform();
  double normal() { return normal_(*this); }
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace infousage
