#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace percolab {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (mix64(b) + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
}

// Order-independent key for an undirected pair.
constexpr std::uint64_t unordered_pair_key(std::uint64_t a, std::uint64_t b) {
  return a < b ? hash_combine(hash_combine(0x7a1dULL, a), b)
               : hash_combine(hash_combine(0x7a1dULL, b), a);
}

std::uint64_t hash_string(std::string_view s);

// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Counter-based random stream keyed by (seed, stream). Every draw is a
/// pure function of (seed, stream, counter), so independent consumers can
/// address the same uniform without sharing state.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t bits_at(std::uint64_t counter) const noexcept;
  double uniform_at(std::uint64_t counter) const noexcept {
    return to_unit(bits_at(counter));
  }

  // Sequential interface on top of the counter.
  std::uint64_t next_bits() noexcept { return bits_at(position_++); }
  double next_uniform() noexcept { return to_unit(next_bits()); }
  std::uint64_t position() const noexcept { return position_; }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint64_t position_ = 0;
};

// Uniform on [0,1) addressed by an arbitrary 64-bit item key.
inline double keyed_uniform(std::uint64_t seed, std::uint64_t stream,
                            std::uint64_t item) noexcept {
  return StreamRng(seed, stream).uniform_at(item);
}

}  // namespace percolab
