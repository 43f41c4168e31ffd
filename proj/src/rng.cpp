#include "corrdet/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace corrdet {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::array<std::uint64_t, 2> CounterRng::block(std::uint64_t j) const {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(j >> 32),
                                id_.index, id_.purpose};
  const Philox4x32::Key key{static_cast<std::uint32_t>(id_.seed),
                            static_cast<std::uint32_t>(id_.seed >> 32)};
  const auto out = Philox4x32::generate(ctr, key);
  return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
          (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

std::array<double, 2> CounterRng::uniform_pair(std::uint64_t j) const {
  const auto b = block(j);
  return {to_open_unit(b[0]), to_open_unit(b[1])};
}

double CounterRng::normal(std::uint64_t j) const {
  const auto [u1, u2] = uniform_pair(j);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngCursor::uniform() {
  if (has_pending_) {
    has_pending_ = false;
    return pending_;
  }
  const auto [a, b] = rng_.uniform_pair(next_block_++);
  pending_ = b;
  has_pending_ = true;
  return a;
}

double RngCursor::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_gamma(RngCursor& cursor, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a)
    const double g = sample_gamma(cursor, shape + 1.0);
    return g * std::pow(cursor.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = cursor.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = cursor.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace corrdet
