#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace pmeans {

/// Seeded, splittable pseudo-random stream.
///
/// Backed by the Philox4x32-10 counter-based generator: the 64-bit seed is
/// the key, the 64-bit stream id occupies the upper half of the 128-bit
/// counter and the position within the stream the lower half. Distinct
/// stream ids therefore never overlap, and identical (seed, stream_id)
/// pairs replay identical sequences on every platform.
///
/// Satisfies std::uniform_random_bit_generator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Unit-mean exponential.
  double exponential();
  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Independent child stream; same seed, stream id derived from
  /// (stream_id, child) by a bijective mix.
  RngStream split(std::uint64_t child) const;

  /// Raw Philox4x32-10 block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace pmeans
