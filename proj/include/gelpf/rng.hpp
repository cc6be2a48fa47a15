#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gelpf {

/// SplitMix64 finalizer; used to derive well-separated child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives a stream seed from a master seed and a path of integer ids
/// (e.g. cell index, replicate index). Independent of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t s = splitmix64(master);
  for (std::uint64_t id : path) s = splitmix64(s ^ splitmix64(id + 0x632BE59BD9B4E019ULL));
  return s;
}

/// Seeded random stream. Owns its engine; copy to fork, pass by reference to advance.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform draw on the open interval (0, 1) with 53 bits of resolution.
  double uniform_open() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t next_u64() noexcept { return engine_(); }

private:
  std::mt19937_64 engine_;
};

}  // namespace gelpf
