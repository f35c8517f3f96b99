#pragma once

#include <array>
#include <cstdint>

namespace stochexp {

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11).
/// Pure function of (counter, key); no internal state.
struct Philox4x64 {
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static Counter generate(Counter ctr, Key key) noexcept;
};

/// Inverse of the standard normal CDF (Wichura, AS241 PPND16).
/// Relative accuracy about 1e-16 on (0, 1).
double normal_quantile(double p);

/// Replayable random stream addressed by (master_seed, path_index, stream_id, lane).
///
/// Output block `n` is Philox(counter = {n, lane, path_index, 0}, key = {master_seed,
/// stream_id}), so two streams differing in any coordinate never share a block and a
/// stream can be reconstructed at any position. Distinct streams may be used on
/// different threads; a single stream is single-owner.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t path_index, std::uint64_t stream_id = 0,
            std::uint64_t lane = 0) noexcept;

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal by inverse-CDF transform of uniform().
  double normal() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Same (seed, path, stream) with a different lane, counter reset.
  [[nodiscard]] RngStream with_lane(std::uint64_t lane) const noexcept;

  std::uint64_t master_seed() const noexcept { return key_[0]; }
  std::uint64_t stream_id() const noexcept { return key_[1]; }
  std::uint64_t path_index() const noexcept { return path_index_; }
  std::uint64_t lane() const noexcept { return lane_; }
  /// Number of 64-bit words consumed so far.
  std::uint64_t counter() const noexcept { return block_ * 4 + pos_ - 4; }

 private:
  void refill() noexcept;

  Philox4x64::Key key_;
  std::uint64_t path_index_;
  std::uint64_t lane_;
  std::uint64_t block_ = 0;
  unsigned pos_ = 4;
  Philox4x64::Counter buffer_{};
};

}  // namespace stochexp
