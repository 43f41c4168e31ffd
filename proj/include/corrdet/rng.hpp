#pragma once

#include <array>
#include <cstdint>

namespace corrdet {

// Philox4x32-10 (Salmon et al., SC'11). Counter-based: the output block is a
// pure function of (counter, key), so any draw can be regenerated from its
// index alone.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

// Identifies an independent stream: (seed, purpose, index). The purpose tag
// separates uses within one experiment (data rows, replacement rows, tuple
// selection) and the index is typically the replication number.
struct StreamId {
  std::uint64_t seed = 0;
  std::uint32_t purpose = 0;
  std::uint32_t index = 0;
};

namespace purpose {
inline constexpr std::uint32_t kData = 0x0001;
inline constexpr std::uint32_t kReplacement = 0x0002;
inline constexpr std::uint32_t kOracle = 0x0003;
inline constexpr std::uint32_t kTuples = 0x0004;
inline constexpr std::uint32_t kMomentRows = 0x0005;
inline constexpr std::uint32_t kOracleMarginal = 0x0006;
inline constexpr std::uint32_t kCommonFactor = 0x0007;
// Added to a purpose tag for the k-th retry of a replication.
inline constexpr std::uint32_t kAttemptStride = 0x10000;
}  // namespace purpose

// Stateless view of one stream. Block j yields 128 random bits; callers map
// one variate to one block so that variate j depends only on (stream, j).
class CounterRng {
 public:
  constexpr explicit CounterRng(StreamId id) : id_(id) {}

  std::array<std::uint64_t, 2> block(std::uint64_t j) const;

  // Both halves of block j as doubles in the open interval (0, 1).
  std::array<double, 2> uniform_pair(std::uint64_t j) const;

  // Standard normal from block j (Box-Muller, cosine branch).
  double normal(std::uint64_t j) const;

  const StreamId& id() const { return id_; }

 private:
  StreamId id_;
};

// Maps the top 52 bits to the midpoint grid of (0, 1); both ends stay exact.
inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Sequential cursor over a stream, for algorithms that consume a variable
// number of uniforms (rejection samplers).
class RngCursor {
 public:
  explicit RngCursor(StreamId id, std::uint64_t start_block = 0)
      : rng_(id), next_block_(start_block) {}

  double uniform();
  double normal();

 private:
  CounterRng rng_;
  std::uint64_t next_block_;
  double pending_ = 0.0;
  bool has_pending_ = false;
};

// Marsaglia-Tsang gamma variate with unit scale; shape > 0.
double sample_gamma(RngCursor& cursor, double shape);

}  // namespace corrdet
