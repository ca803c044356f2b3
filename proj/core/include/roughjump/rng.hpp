#pragma once

#include <array>
#include <cstdint>

namespace roughjump {

// One block of the Philox-4x32-10 counter-based generator.  Pure function of
// (counter, key): any (seed, stream, position) triple can be regenerated
// independently, which is what makes per-path streams reproducible across
// parallel runs.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Standard-normal quantile: Acklam's rational approximation polished by one
// Halley step against erfc, accurate to full double precision away from the
// extreme tails.
double normal_quantile(double u);

// A buffered stream over philox4x32 blocks.  Streams with the same seed and
// different stream ids are statistically independent; split() derives further
// independent ids deterministically.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  double uniform();       // [0, 1), 53-bit resolution
  double uniform_open();  // (0, 1)
  double normal();        // standard normal (Box-Muller, spare cached)
  // Standard normal conditioned on lo < Z < hi, by quantile inversion.
  double truncated_normal(double lo, double hi);
  // Exact Poisson by inversion; large means split recursively so the
  // inversion never underflows.
  int poisson(double mean);

  RngStream split(std::uint64_t substream) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace roughjump
