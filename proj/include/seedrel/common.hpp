#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seedrel {

/// Dense internal node index, 0..N-1.
using NodeIndex = std::uint32_t;
/// External publication identifier (PMID in NIH-OCC data).
using PubId = std::int64_t;

inline constexpr NodeIndex kNoNode = static_cast<NodeIndex>(-1);

/// Base error for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Approaches

enum class Approach : std::uint8_t { DC = 0, BC, CC, RA, DC_BC_CC, DC_BC_CC_RA };

inline constexpr std::array<Approach, 6> kAllApproaches = {
    Approach::DC, Approach::BC, Approach::CC,
    Approach::RA, Approach::DC_BC_CC, Approach::DC_BC_CC_RA};

inline constexpr std::string_view approach_name(Approach a) {
  switch (a) {
    case Approach::DC: return "DC";
    case Approach::BC: return "BC";
    case Approach::CC: return "CC";
    case Approach::RA: return "RA";
    case Approach::DC_BC_CC: return "DC_BC_CC";
    case Approach::DC_BC_CC_RA: return "DC_BC_CC_RA";
  }
  return "?";
}

/// Case-insensitive; accepts '-' in place of '_' ("dc-bc-cc").
inline std::optional<Approach> parse_approach(std::string_view text) {
  std::string norm;
  norm.reserve(text.size());
  for (char c : text) {
    if (c == '-') c = '_';
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    norm.push_back(c);
  }
  for (Approach a : kAllApproaches)
    if (approach_name(a) == norm) return a;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Deterministic hashing and random numbers

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Platform-independent combination of two 64-bit values; used to derive
/// per-review and per-approach sub-seeds from one master seed.
inline constexpr std::uint64_t stable_hash(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x632BE59BD9B4E019ull + (a << 6) + (a >> 2)));
}

inline std::uint64_t stable_hash(std::string_view bytes, std::uint64_t h = 0xCBF29CE484222325ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

using Rng = std::mt19937_64;

/// Unbiased integer in [0, bound). std::uniform_int_distribution is
/// implementation-defined, which would break cross-toolchain reproducibility.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Fisher-Yates over [first, last).
template <typename It>
void portable_shuffle(It first, It last, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = uniform_below(rng, i);
    std::iter_swap(first + static_cast<std::ptrdiff_t>(i - 1),
                   first + static_cast<std::ptrdiff_t>(j));
  }
}

/// Uniform random k-subset of `items` (partial Fisher-Yates); result is in
/// selection order.
template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> items, std::size_t k, Rng& rng) {
  if (k > items.size()) throw InputError("sample size exceeds population");
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + uniform_below(rng, items.size() - i);
    std::swap(items[i], items[j]);
  }
  items.resize(k);
  return items;
}

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace seedrel
