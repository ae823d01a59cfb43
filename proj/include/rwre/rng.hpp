#ifndef RWRE_RNG_HPP
#define RWRE_RNG_HPP

#include <cstdint>

// Counter-based random number generation. Every random quantity in the
// project is a pure function of (stream key, counter), so values never
// depend on query order or on how work is split across threads.
namespace rwre::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Value of the stream `key` at position `counter`.
inline std::uint64_t at(std::uint64_t key, std::uint64_t counter) {
  return mix64(key + kGolden * (counter + 1));
}

// Map 64 random bits to a double in [0, 1).
inline double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Derive an independent substream from (key, label, index).
inline std::uint64_t substream(std::uint64_t key, std::uint64_t label,
                               std::uint64_t index = 0) {
  return mix64(mix64(key ^ mix64(label)) + kGolden * (index + 1));
}

// Fixed stream labels.
inline constexpr std::uint64_t kEnvStream = 0x656e7669726f6e6dULL;
inline constexpr std::uint64_t kWalkStream = 0x77616c6b73746570ULL;
inline constexpr std::uint64_t kHitStream = 0x68697474696d6573ULL;
inline constexpr std::uint64_t kReturnStream = 0x72657475726e7072ULL;

}  // namespace rwre::rng

#endif
