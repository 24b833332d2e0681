#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace jumpfrac {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// FNV-1a, stable across platforms.
constexpr std::uint64_t hash_label(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Counter-based generator: the n-th draw of a key is a pure function of
/// (key, n), so streams can be indexed directly without replaying them.
class CounterRng {
public:
  explicit constexpr CounterRng(std::uint64_t key, std::uint64_t counter = 0) noexcept
      : key_(mix64(key)), counter_(counter) {}

  constexpr std::uint64_t at(std::uint64_t n) const noexcept {
    return mix64(key_ ^ mix64(n * kGolden));
  }
  std::uint64_t next_u64() noexcept { return at(counter_++); }

  /// Uniform on the open interval (0, 1).
  static double to_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }
  double uniform_at(std::uint64_t n) const noexcept { return to_unit(at(n)); }
  double uniform() noexcept { return to_unit(next_u64()); }

  /// Standard normal from draws 2n and 2n+1 (Box-Muller, cosine branch).
  double normal_at(std::uint64_t n) const noexcept {
    const double u1 = uniform_at(2 * n);
    const double u2 = uniform_at(2 * n + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  double normal() noexcept {
    const double z = normal_at(counter_);
    ++counter_;
    return z;
  }

  std::uint64_t key() const noexcept { return key_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

/// Mixes a master seed, a stream label and an index into a child seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                    std::uint64_t index) noexcept {
  const std::uint64_t a = mix64(master);
  const std::uint64_t b = mix64(a ^ hash_label(label));
  return mix64(b + index * kGolden);
}

}  // namespace jumpfrac
