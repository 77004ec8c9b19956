#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace randpoly {

/// Philox4x64-10 block function (Salmon et al., counter-based).
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key);

/// Deterministic random stream keyed by (master_seed, stream_id).
///
/// Output word i is word i % 4 of philox4x64({i / 4, 0, 0, 0},
/// {master_seed, stream_id}). Streams need no shared state, so replicate i
/// can always use stream_id = i whatever the thread layout. Satisfies
/// UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  static constexpr std::string_view kAlgorithmId = "philox4x64-10";

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : key_{master_seed, stream_id} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t master_seed() const noexcept { return key_[0]; }
  std::uint64_t stream_id() const noexcept { return key_[1]; }
  std::string_view algorithm_id() const noexcept { return kAlgorithmId; }
  /// Number of 64-bit words drawn so far.
  std::uint64_t position() const noexcept { return block_ * 4 - (4 - pos_); }

 private:
  void refill() {
    buffer_ = philox4x64({block_, 0, 0, 0}, key_);
    ++block_;
    pos_ = 0;
  }

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> buffer_{};
  std::uint64_t block_ = 0;
  int pos_ = 4;
};

inline RngStream make_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return {master_seed, stream_id};
}

}  // namespace randpoly
