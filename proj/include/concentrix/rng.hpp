#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace concentrix {

/// SplitMix64 finalizer applied to seed + golden * (i + 1).
std::uint64_t mix(std::uint64_t seed, std::uint64_t i);

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based stream. Identical (seed, stream) give identical draws on every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  /// Independent child stream for trial i.
  RandomStream split(std::uint64_t i) const;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t position() const noexcept { return position_; }

  std::uint64_t next_u64();
  /// Uniform on the open interval (0,1).
  double uniform_open();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  double normal();
  /// +1 or -1 with equal probability.
  double rademacher();
  bool bernoulli(double p);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  std::vector<double> normal_vector(std::size_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint32_t, 2> key_;
  std::uint64_t position_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;  // 32-bit words consumed from block_
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Walker alias table for O(1) categorical draws.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(const std::vector<double>& probabilities);

  std::size_t sample(RandomStream& rng) const;
  std::size_t size() const noexcept { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace concentrix
