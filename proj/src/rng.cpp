#include "percolab/rng.hpp"

namespace percolab {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}
}  // namespace

std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
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

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept {
  const std::uint64_t k = mix64(seed);
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  const std::uint64_t s = mix64(stream ^ 0x5bd1e995ULL);
  stream_lo_ = static_cast<std::uint32_t>(s);
  stream_hi_ = static_cast<std::uint32_t>(s >> 32);
}

std::uint64_t StreamRng::bits_at(std::uint64_t counter) const noexcept {
  const auto out = philox4x32({static_cast<std::uint32_t>(counter),
                               static_cast<std::uint32_t>(counter >> 32),
                               stream_lo_, stream_hi_},
                              key_);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace percolab
