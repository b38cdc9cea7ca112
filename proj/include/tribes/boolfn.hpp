#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tribes/exact.hpp"

namespace tribes {

inline constexpr unsigned kDefaultTruthTableCap = 24;

/// OR of ANDs over consecutive blocks of construction positions.
///
/// Position q (0-based) belongs to the tribe whose block contains it; the
/// function reads positions 0 .. relevant()-1 only. var_map[q] names the
/// original variable (0-based) sitting at position q.
struct TribesFunction {
  std::vector<std::uint32_t> tribe_sizes;
  std::vector<std::size_t> var_map;
  std::size_t n = 0;

  std::size_t relevant() const noexcept;
  /// Index of the tribe containing position q, or tribe count if q is
  /// beyond the relevant positions.
  std::size_t tribe_of(std::size_t position) const noexcept;

  friend bool operator==(const TribesFunction&, const TribesFunction&) = default;
};

/// Packed bit vector x, entry i is x_{i+1} in one-based notation.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t size);
  Assignment(std::initializer_list<int> bits);

  std::size_t size() const noexcept { return size_; }
  bool operator[](std::size_t i) const noexcept {
    return ((words_[i / 64] >> (i % 64)) & 1u) != 0;
  }
  void set(std::size_t i, bool value) noexcept;
  void flip(std::size_t i) noexcept { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

  std::span<std::uint64_t> words() noexcept { return words_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// f restricted to its first `vars` variables, stored as 2^vars bits.
/// Bit b holds f(x) where x_{j+1} is bit j of b.
class TruthTable {
 public:
  explicit TruthTable(unsigned vars);

  unsigned vars() const noexcept { return vars_; }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << vars_; }

  bool get(std::uint64_t b) const noexcept {
    return ((words_[b >> 6] >> (b & 63)) & 1u) != 0;
  }
  void set(std::uint64_t b, bool value) noexcept;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

 private:
  unsigned vars_;
  std::vector<std::uint64_t> words_;
};

/// Truth table over the relevant positions. Throws CapacityExceeded when
/// f.relevant() > cap.
TruthTable tribes_truth_table(const TribesFunction& f,
                              unsigned cap = kDefaultTruthTableCap);

/// f(x) with x indexed by construction position.
bool evaluate(const TribesFunction& f, const Assignment& x);

Dyadic expectation(const TruthTable& tt);
/// Pr[f(x) != f(x with variable `var` flipped)]; var is 0-based.
Dyadic influence(const TruthTable& tt, unsigned var);
/// E[f](1 - E[f]) for 0/1-valued f.
Dyadic variance(const TruthTable& tt);

/// bits[b] <= bits[b | 2^j] for every b and j.
bool is_monotone(const TruthTable& tt);

struct SampledEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;

  friend bool operator==(const SampledEstimate&, const SampledEstimate&) = default;
};

/// Monte Carlo influence of construction position `position`.
///
/// Sample i draws its bits from a counter-based generator keyed by
/// (seed, i), so the result is fixed by (seed, samples, position).
SampledEstimate influence_sampled(const TribesFunction& f, std::size_t position,
                                  std::uint64_t samples, std::uint64_t seed);

/// Monte Carlo estimate of E[f], same generator contract.
SampledEstimate expectation_sampled(const TribesFunction& f,
                                    std::uint64_t samples, std::uint64_t seed);

}  // namespace tribes
