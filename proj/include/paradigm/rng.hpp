#pragma once

#include <array>
#include <cstdint>

namespace paradigm {

/// Philox4x32-10 counter-based block function (Salmon et al., Random123).
/// Maps a 128-bit counter and 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Deterministic random stream identified by (seed, stream_id).
///
/// The seed is the Philox key and the stream id occupies the upper half of the
/// counter, so every id addresses its own 2^64-block subsequence. The sequence
/// depends only on (seed, stream_id); no platform-dependent std:: distributions
/// are used.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// 53-bit uniform on [0, 1).
  double uniform();
  /// 53-bit uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - uniform(); }
  /// Exponential(1) by inversion.
  double exponential();
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();
  /// Number of failures before the first success of Bernoulli(q) trials,
  /// given log1p(-q). Saturates at 2^62.
  std::uint64_t geometric_failures(double log_one_minus_q);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Stream id layout used by the experiment runner:
/// bits 48..63 process family, 32..47 grid point, 0..31 replicate.
constexpr std::uint64_t stream_id_for(std::uint64_t family, std::uint64_t grid_index, std::uint64_t replicate) {
  return (family << 48) | (grid_index << 32) | replicate;
}

}  // namespace paradigm
