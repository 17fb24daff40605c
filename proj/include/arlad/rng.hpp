#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace arlad {

/// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: the output
/// depends only on the counter and the key.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

/// What a substream is used for. Keeps e.g. innovation draws and bootstrap
/// multipliers of the same replication statistically independent.
enum class Purpose : std::uint16_t {
  generic = 0,
  innovation = 1,
  rw_weights = 2,
  bootstrap_seed = 3,
  test = 4,
};

/// A counter-based random stream identified by (seed, replication, purpose,
/// substream). Two streams with different identifiers never share a block, so
/// simulations can hand one stream to each replication and get identical
/// results for any thread count.
///
/// Satisfies UniformRandomBitGenerator, but the distribution helpers below
/// are preferred: they are bit-reproducible across standard libraries.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed, std::uint64_t replication = 0,
                  Purpose purpose = Purpose::generic,
                  std::uint16_t substream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() noexcept { return next_u64(); }

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  /// Standard normal via the Box-Muller transform (pairs are cached).
  double normal() noexcept;
  /// Standard exponential, mean 1 and variance 1.
  double exponential() noexcept;

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter base_;
  std::uint32_t block_index_ = 0;
  Philox4x32::Counter buffer_{};
  int buffered_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace arlad
