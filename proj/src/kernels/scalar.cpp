#include <bit>
#include <numeric>

#include "tribes/kernels.hpp"

namespace tribes::kernels::scalar {

using detail::kLowHalfMask;
using detail::kVariablePattern;

std::uint64_t popcount(std::span<const std::uint64_t> words) {
  std::uint64_t total = 0;
  for (const std::uint64_t w : words) total += std::popcount(w);
  return total;
}

std::uint64_t flip_diff_count(std::span<const std::uint64_t> words,
                              unsigned var) {
  std::uint64_t pairs = 0;
  if (var < 6) {
    const unsigned shift = 1u << var;
    for (const std::uint64_t w : words) {
      pairs += std::popcount((w ^ (w >> shift)) & kLowHalfMask[var]);
    }
  } else {
    const std::size_t stride = std::size_t{1} << (var - 6);
    for (std::size_t base = 0; base < words.size(); base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        pairs += std::popcount(words[i] ^ words[i + stride]);
      }
    }
  }
  return 2 * pairs;
}

std::uint64_t monotone_violations(std::span<const std::uint64_t> words,
                                  unsigned var) {
  std::uint64_t bad = 0;
  if (var < 6) {
    const unsigned shift = 1u << var;
    for (const std::uint64_t w : words) {
      bad += std::popcount(w & ~(w >> shift) & kLowHalfMask[var]);
    }
  } else {
    const std::size_t stride = std::size_t{1} << (var - 6);
    for (std::size_t base = 0; base < words.size(); base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        bad += std::popcount(words[i] & ~words[i + stride]);
      }
    }
  }
  return bad;
}

void fill_tribes(std::span<std::uint64_t> words,
                 std::span<const std::uint32_t> tribe_sizes) {
  const unsigned vars =
      std::accumulate(tribe_sizes.begin(), tribe_sizes.end(), 0u);
  const std::uint64_t valid = detail::small_table_mask(vars);
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::uint64_t any = 0;
    unsigned v = 0;
    for (const std::uint32_t size : tribe_sizes) {
      std::uint64_t all = ~0ULL;
      for (std::uint32_t k = 0; k < size; ++k, ++v) {
        all &= v < 6 ? kVariablePattern[v]
                     : (((i >> (v - 6)) & 1u) != 0 ? ~0ULL : 0ULL);
      }
      any |= all;
    }
    words[i] = any & valid;
  }
}

}  // namespace tribes::kernels::scalar
