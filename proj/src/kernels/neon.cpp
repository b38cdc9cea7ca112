// NEON variants for aarch64, where Advanced SIMD is part of the baseline.

#include <arm_neon.h>

#include <bit>

#include "tribes/kernels.hpp"

namespace tribes::kernels::neon {

namespace {

using detail::kLowHalfMask;
using detail::kVariablePattern;

inline uint64x2_t popcount_lanes(uint64x2_t v) {
  const uint8x16_t bytes = vcntq_u8(vreinterpretq_u8_u64(v));
  return vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(bytes)));
}

inline std::uint64_t horizontal_sum(uint64x2_t acc) {
  return vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1);
}

inline uint64x2_t load(const std::uint64_t* p) { return vld1q_u64(p); }

}  // namespace

std::uint64_t popcount(std::span<const std::uint64_t> words) {
  const std::size_t n = words.size();
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_u64(acc, popcount_lanes(load(&words[i])));
  std::uint64_t total = horizontal_sum(acc);
  for (; i < n; ++i) total += std::popcount(words[i]);
  return total;
}

std::uint64_t flip_diff_count(std::span<const std::uint64_t> words,
                              unsigned var) {
  const std::size_t n = words.size();
  if (n < 2) return scalar::flip_diff_count(words, var);
  uint64x2_t acc = vdupq_n_u64(0);
  if (var < 6) {
    const uint64x2_t mask = vdupq_n_u64(kLowHalfMask[var]);
    const int64x2_t shift = vdupq_n_s64(-(std::int64_t{1} << var));
    for (std::size_t i = 0; i < n; i += 2) {
      const uint64x2_t w = load(&words[i]);
      acc = vaddq_u64(acc, popcount_lanes(vandq_u64(veorq_u64(w, vshlq_u64(w, shift)), mask)));
    }
    return 2 * horizontal_sum(acc);
  }
  const std::size_t stride = std::size_t{1} << (var - 6);
  if (stride == 1) {
    for (std::size_t i = 0; i < n; i += 2) {
      const uint64x2_t w = load(&words[i]);
      acc = vaddq_u64(acc, popcount_lanes(veorq_u64(w, vextq_u64(w, w, 1))));
    }
    return horizontal_sum(acc);
  }
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 2) {
      acc = vaddq_u64(acc, popcount_lanes(veorq_u64(load(&words[i]), load(&words[i + stride]))));
    }
  }
  return 2 * horizontal_sum(acc);
}

std::uint64_t monotone_violations(std::span<const std::uint64_t> words,
                                  unsigned var) {
  const std::size_t n = words.size();
  if (n < 2) return scalar::monotone_violations(words, var);
  uint64x2_t acc = vdupq_n_u64(0);
  if (var < 6) {
    const uint64x2_t mask = vdupq_n_u64(kLowHalfMask[var]);
    const int64x2_t shift = vdupq_n_s64(-(std::int64_t{1} << var));
    for (std::size_t i = 0; i < n; i += 2) {
      const uint64x2_t w = load(&words[i]);
      // vbicq(a, b) = a & ~b
      const uint64x2_t bad = vandq_u64(vbicq_u64(w, vshlq_u64(w, shift)), mask);
      acc = vaddq_u64(acc, popcount_lanes(bad));
    }
    return horizontal_sum(acc);
  }
  const std::size_t stride = std::size_t{1} << (var - 6);
  if (stride == 1) {
    const uint64x2_t low_lane = vcombine_u64(vcreate_u64(~0ULL), vcreate_u64(0));
    for (std::size_t i = 0; i < n; i += 2) {
      const uint64x2_t w = load(&words[i]);
      const uint64x2_t bad = vandq_u64(vbicq_u64(w, vextq_u64(w, w, 1)), low_lane);
      acc = vaddq_u64(acc, popcount_lanes(bad));
    }
    return horizontal_sum(acc);
  }
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 2) {
      acc = vaddq_u64(acc, popcount_lanes(vbicq_u64(load(&words[i]), load(&words[i + stride]))));
    }
  }
  return horizontal_sum(acc);
}

void fill_tribes(std::span<std::uint64_t> words,
                 std::span<const std::uint32_t> tribe_sizes) {
  const std::size_t n = words.size();
  if (n < 2) {
    scalar::fill_tribes(words, tribe_sizes);
    return;
  }
  const uint64x2_t ones = vdupq_n_u64(1);
  const uint64x2_t lane_offsets = vcombine_u64(vcreate_u64(0), vcreate_u64(1));
  for (std::size_t i = 0; i < n; i += 2) {
    const uint64x2_t index = vaddq_u64(vdupq_n_u64(i), lane_offsets);
    uint64x2_t any = vdupq_n_u64(0);
    unsigned v = 0;
    for (const std::uint32_t size : tribe_sizes) {
      uint64x2_t all = vdupq_n_u64(~0ULL);
      for (std::uint32_t k = 0; k < size; ++k, ++v) {
        uint64x2_t column;
        if (v < 6) {
          column = vdupq_n_u64(kVariablePattern[v]);
        } else {
          const int64x2_t shift = vdupq_n_s64(-static_cast<std::int64_t>(v - 6));
          column = vceqq_u64(vandq_u64(vshlq_u64(index, shift), ones), ones);
        }
        all = vandq_u64(all, column);
      }
      any = vorrq_u64(any, all);
    }
    vst1q_u64(&words[i], any);
  }
}

}  // namespace tribes::kernels::neon
