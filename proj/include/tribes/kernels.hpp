#pragma once

// Word-parallel kernels over truth-table bit arrays.
//
// Layout: bit b of the table lives in words[b / 64] at bit position b % 64,
// and bit j of b is the value of variable j (variable 0 is the least
// significant bit). Tables with fewer than 6 variables occupy one word whose
// bits at and above 2^vars are zero.
//
// Every entry point has a portable scalar reference and, where the target
// allows, SIMD variants. All variants must return identical results; the
// scalar one is the reference.

#include <cstdint>
#include <span>
#include <string_view>

namespace tribes::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;

  /// Number of set bits.
  std::uint64_t (*popcount)(std::span<const std::uint64_t> words);

  /// Number of indices b with bit[b] != bit[b ^ 2^var]. Always even.
  std::uint64_t (*flip_diff_count)(std::span<const std::uint64_t> words,
                                   unsigned var);

  /// Number of indices b with bit var of b clear, bit[b] = 1 and
  /// bit[b | 2^var] = 0.
  std::uint64_t (*monotone_violations)(std::span<const std::uint64_t> words,
                                       unsigned var);

  /// Writes the OR-of-ANDs table for consecutive tribes of the given sizes.
  /// words.size() must be max(1, 2^(t-6)) with t = sum of sizes.
  void (*fill_tribes)(std::span<std::uint64_t> words,
                      std::span<const std::uint32_t> tribe_sizes);
};

/// Whether this build and this CPU can run the given variant.
bool supported(Isa isa) noexcept;

/// Kernel table for a specific variant; std::invalid_argument if unsupported.
const KernelTable& table(Isa isa);

/// Best supported variant, probed once. Setting TRIBES_KERNELS=scalar (or
/// avx2 / neon) in the environment forces a choice.
const KernelTable& active();

namespace scalar {
std::uint64_t popcount(std::span<const std::uint64_t> words);
std::uint64_t flip_diff_count(std::span<const std::uint64_t> words,
                              unsigned var);
std::uint64_t monotone_violations(std::span<const std::uint64_t> words,
                                  unsigned var);
void fill_tribes(std::span<std::uint64_t> words,
                 std::span<const std::uint32_t> tribe_sizes);
}  // namespace scalar

#if defined(TRIBES_HAVE_AVX2_KERNELS)
namespace avx2 {
std::uint64_t popcount(std::span<const std::uint64_t> words);
std::uint64_t flip_diff_count(std::span<const std::uint64_t> words,
                              unsigned var);
std::uint64_t monotone_violations(std::span<const std::uint64_t> words,
                                  unsigned var);
void fill_tribes(std::span<std::uint64_t> words,
                 std::span<const std::uint32_t> tribe_sizes);
}  // namespace avx2
#endif

#if defined(TRIBES_HAVE_NEON_KERNELS)
namespace neon {
std::uint64_t popcount(std::span<const std::uint64_t> words);
std::uint64_t flip_diff_count(std::span<const std::uint64_t> words,
                              unsigned var);
std::uint64_t monotone_violations(std::span<const std::uint64_t> words,
                                  unsigned var);
void fill_tribes(std::span<std::uint64_t> words,
                 std::span<const std::uint32_t> tribe_sizes);
}  // namespace neon
#endif

namespace detail {

// Positions b inside a 64-bit word whose bit `var` (var < 6) is clear.
inline constexpr std::uint64_t kLowHalfMask[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL};

// Value pattern of variable `var` (var < 6) across the 64 indices of a word.
inline constexpr std::uint64_t kVariablePattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};

// Valid-bit mask for a table of `vars` < 6 variables.
inline constexpr std::uint64_t small_table_mask(unsigned vars) {
  return vars >= 6 ? ~0ULL : ((1ULL << (1u << vars)) - 1);
}

}  // namespace detail

}  // namespace tribes::kernels
