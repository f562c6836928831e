#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace takagi {

/// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
/// Maps a 128-bit counter and a 64-bit key to 128 random bits.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

/// A reproducible random stream identified by (seed, a, b). Distinct
/// (a, b) give independent substreams, so results never depend on the
/// order in which parallel workers draw.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint32_t a = 0, std::uint32_t b = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::uint32_t next_u32();

  Philox4x32::Key key_;
  std::uint64_t block_ = 0;
  std::uint32_t a_, b_;
  Philox4x32::Counter buf_{};
  int used_ = 4;
  bool haveSpare_ = false;
  double spare_ = 0.0;
};

}  // namespace takagi
