#include "arlad/rng.hpp"

#include <cmath>
#include <numbers>

namespace arlad {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline Philox4x32::Counter round(const Philox4x32::Counter& c,
                                 const Philox4x32::Key& k) noexcept {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter counter, Key key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    counter = round(counter, key);
  }
  return counter;
}

// Counter layout: word 0 is the block index within the stream, word 1 the
// substream, word 2 the low half of the replication, word 3 the purpose in
// its high 16 bits and bits 32..47 of the replication in its low 16 bits.
Stream::Stream(std::uint64_t seed, std::uint64_t replication, Purpose purpose,
               std::uint16_t substream) noexcept
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      base_{0u, substream, static_cast<std::uint32_t>(replication),
            (static_cast<std::uint32_t>(purpose) << 16) |
                static_cast<std::uint32_t>((replication >> 32) & 0xFFFFu)} {}

std::uint32_t Stream::next_u32() noexcept {
  if (buffered_ == 0) {
    Philox4x32::Counter ctr = base_;
    ctr[0] = block_index_++;
    buffer_ = Philox4x32::block(ctr, key_);
    buffered_ = 4;
  }
  return buffer_[4 - buffered_--];
}

std::uint64_t Stream::next_u64() noexcept {
  const std::uint64_t hi = next_u32();
  const std::uint64_t lo = next_u32();
  return (hi << 32) | lo;
}

double Stream::uniform() noexcept {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(next_u64() >> 11) + 0.5) * kScale;
}

double Stream::normal() noexcept {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

double Stream::exponential() noexcept { return -std::log(uniform()); }

}  // namespace arlad
