#include "bsreg/random.hpp"

#include <cmath>
#include <numbers>

namespace bsreg::rng {
namespace {

constexpr std::uint32_t kW32A = 0x9E3779B9;
constexpr std::uint32_t kW32B = 0xBB67AE85;
constexpr std::uint32_t kM4x32A = 0xD2511F53;
constexpr std::uint32_t kM4x32B = 0xCD9E8D57;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM4x32A) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM4x32B) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW32A;
    key[1] += kW32B;
  }
  return ctr;
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream_id, std::uint32_t domain)
    : seed_(seed), domain_(domain), stream_id_(stream_id) {
  const std::uint64_t k = splitmix64(seed ^ splitmix64(0xB5ADu + domain));
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

std::uint64_t Stream::next_u64() {
  if (buffered_words_ < 2) {
    buffer_ = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)},
                         key_);
    ++block_;
    buffered_words_ = 4;
  }
  const int i = 4 - buffered_words_;
  buffered_words_ -= 2;
  return (static_cast<std::uint64_t>(buffer_[i]) << 32) | buffer_[i + 1];
}

double Stream::next_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double radius = std::sqrt(-2.0 * std::log(next_uniform()));
  const double angle = 2.0 * std::numbers::pi * next_uniform();
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Stream Stream::substream(std::uint64_t stream_id) const { return Stream(seed_, stream_id, domain_); }

double normal_from_uniforms(Stream& source) { return source.next_normal(); }

}  // namespace bsreg::rng
