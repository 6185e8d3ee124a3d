#pragma once

#include <cstdint>

namespace beadforge {

// Stateless 64-bit finalizer (splitmix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256** seeded from (master_seed, stream_index).
//
// Two streams with equal keys produce identical sequences. The key is mixed
// statelessly, so stream i can be constructed on any thread without
// touching other streams.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next();

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  // Standard normal (polar method; the spare value is cached in the stream).
  double normal();

  // Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_index() const { return index_; }

 private:
  std::uint64_t s_[4];
  std::uint64_t master_;
  std::uint64_t index_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream index namespace: a tag (criterion, experiment) plus a replicate.
constexpr std::uint64_t stream_id(std::uint64_t tag, std::uint64_t replicate) {
  return (tag << 40) ^ replicate;
}

}  // namespace beadforge
