#pragma once

#include <array>
#include <cstdint>

namespace bsreg::rng {

// Philox4x32-10 block function (Salmon et al., SC'11): a keyed bijection on
// 128-bit counters.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Counter-based random stream. Every (seed, domain, stream_id) triple names an
// independent sequence, so replication r of a study can be replayed in
// isolation no matter which worker runs it.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t stream_id, std::uint32_t domain = 0);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double next_uniform();
  // Standard normal variate (Box-Muller on two uniforms).
  double next_normal();

  // Independent child stream sharing this stream's seed and domain.
  [[nodiscard]] Stream substream(std::uint64_t stream_id) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t seed_;
  std::uint32_t domain_;
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_words_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

double normal_from_uniforms(Stream& source);

}  // namespace bsreg::rng
