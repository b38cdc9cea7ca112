// AVX2 variants. This translation unit is built with -mavx2 and must only be
// entered after dispatch has confirmed CPU support.

#include <immintrin.h>

#include <bit>
#include <numeric>

#include "tribes/kernels.hpp"

namespace tribes::kernels::avx2 {

namespace {

using detail::kLowHalfMask;
using detail::kVariablePattern;

// Per-64-bit-lane popcount via nibble lookup (Mula's method).
inline __m256i popcount_lanes(__m256i v) {
  const __m256i lookup =
      _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_nibble = _mm256_set1_epi8(0x0F);
  const __m256i lo = _mm256_and_si256(v, low_nibble);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_nibble);
  const __m256i bytes = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo),
                                        _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(bytes, _mm256_setzero_si256());
}

inline std::uint64_t horizontal_sum(__m256i acc) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

inline __m256i load(const std::uint64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

// Swaps word pairs at distance 1 or 2 inside a 4-word vector.
inline __m256i partner_words(__m256i v, std::size_t stride) {
  return stride == 1 ? _mm256_permute4x64_epi64(v, _MM_SHUFFLE(2, 3, 0, 1))
                     : _mm256_permute4x64_epi64(v, _MM_SHUFFLE(1, 0, 3, 2));
}

// Lanes holding the low word of each (i, i + stride) pair.
inline __m256i low_partner_lanes(std::size_t stride) {
  return stride == 1 ? _mm256_setr_epi64x(-1, 0, -1, 0)
                     : _mm256_setr_epi64x(-1, -1, 0, 0);
}

}  // namespace

std::uint64_t popcount(std::span<const std::uint64_t> words) {
  const std::size_t n = words.size();
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_epi64(acc, popcount_lanes(load(&words[i])));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < n; ++i) total += std::popcount(words[i]);
  return total;
}

std::uint64_t flip_diff_count(std::span<const std::uint64_t> words,
                              unsigned var) {
  const std::size_t n = words.size();
  if (n < 4) return scalar::flip_diff_count(words, var);
  __m256i acc = _mm256_setzero_si256();
  if (var < 6) {
    const __m256i mask = _mm256_set1_epi64x(static_cast<long long>(kLowHalfMask[var]));
    const __m128i shift = _mm_cvtsi32_si128(1 << var);
    for (std::size_t i = 0; i < n; i += 4) {
      const __m256i w = load(&words[i]);
      const __m256i diff =
          _mm256_and_si256(_mm256_xor_si256(w, _mm256_srl_epi64(w, shift)), mask);
      acc = _mm256_add_epi64(acc, popcount_lanes(diff));
    }
    return 2 * horizontal_sum(acc);
  }
  const std::size_t stride = std::size_t{1} << (var - 6);
  if (stride < 4) {
    // Both halves of every pair sit in the same vector; XOR with the partner
    // counts each differing pair twice.
    for (std::size_t i = 0; i < n; i += 4) {
      const __m256i w = load(&words[i]);
      acc = _mm256_add_epi64(
          acc, popcount_lanes(_mm256_xor_si256(w, partner_words(w, stride))));
    }
    return horizontal_sum(acc);
  }
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 4) {
      const __m256i diff =
          _mm256_xor_si256(load(&words[i]), load(&words[i + stride]));
      acc = _mm256_add_epi64(acc, popcount_lanes(diff));
    }
  }
  return 2 * horizontal_sum(acc);
}

std::uint64_t monotone_violations(std::span<const std::uint64_t> words,
                                  unsigned var) {
  const std::size_t n = words.size();
  if (n < 4) return scalar::monotone_violations(words, var);
  __m256i acc = _mm256_setzero_si256();
  if (var < 6) {
    const __m256i mask = _mm256_set1_epi64x(static_cast<long long>(kLowHalfMask[var]));
    const __m128i shift = _mm_cvtsi32_si128(1 << var);
    for (std::size_t i = 0; i < n; i += 4) {
      const __m256i w = load(&words[i]);
      // andnot(a, b) = ~a & b
      const __m256i bad = _mm256_and_si256(
          _mm256_andnot_si256(_mm256_srl_epi64(w, shift), w), mask);
      acc = _mm256_add_epi64(acc, popcount_lanes(bad));
    }
    return horizontal_sum(acc);
  }
  const std::size_t stride = std::size_t{1} << (var - 6);
  if (stride < 4) {
    const __m256i lanes = low_partner_lanes(stride);
    for (std::size_t i = 0; i < n; i += 4) {
      const __m256i w = load(&words[i]);
      const __m256i bad = _mm256_and_si256(
          _mm256_andnot_si256(partner_words(w, stride), w), lanes);
      acc = _mm256_add_epi64(acc, popcount_lanes(bad));
    }
    return horizontal_sum(acc);
  }
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 4) {
      const __m256i bad =
          _mm256_andnot_si256(load(&words[i + stride]), load(&words[i]));
      acc = _mm256_add_epi64(acc, popcount_lanes(bad));
    }
  }
  return horizontal_sum(acc);
}

void fill_tribes(std::span<std::uint64_t> words,
                 std::span<const std::uint32_t> tribe_sizes) {
  const std::size_t n = words.size();
  if (n < 4) {
    scalar::fill_tribes(words, tribe_sizes);
    return;
  }
  const __m256i ones = _mm256_set1_epi64x(1);
  const __m256i lane_offsets = _mm256_setr_epi64x(0, 1, 2, 3);
  for (std::size_t i = 0; i < n; i += 4) {
    const __m256i index =
        _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(i)), lane_offsets);
    __m256i any = _mm256_setzero_si256();
    unsigned v = 0;
    for (const std::uint32_t size : tribe_sizes) {
      __m256i all = _mm256_set1_epi64x(-1);
      for (std::uint32_t k = 0; k < size; ++k, ++v) {
        __m256i column;
        if (v < 6) {
          column = _mm256_set1_epi64x(static_cast<long long>(kVariablePattern[v]));
        } else {
          const __m256i bit = _mm256_and_si256(
              _mm256_srlv_epi64(index, _mm256_set1_epi64x(v - 6)), ones);
          column = _mm256_cmpeq_epi64(bit, ones);
        }
        all = _mm256_and_si256(all, column);
      }
      any = _mm256_or_si256(any, all);
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(&words[i]), any);
  }
}

}  // namespace tribes::kernels::avx2
