#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace confset {

/// SplitMix64 finalizer. Used for seed derivation only, never as a stream.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// FNV-1a over a byte string.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Child seed for one (repetition, purpose) pair of an experiment.
/// Distinct (index, tag) pairs give unrelated streams for the same master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::string_view tag) noexcept;

// Random source with a fixed, documented algorithm set so that a seed produces
// the same draws on every standard library:
//   engine   std::mt19937_64 (bit-exact by the standard)
//   uniform  top 53 bits of one engine word, scaled by 2^-53
//   integer  rejection sampling on the low bits, no modulo bias
//   normal   Box-Muller; both variates of a pair are used, cosine branch first
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }
  /// Uniform integer on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace confset
