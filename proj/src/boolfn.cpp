#include "tribes/boolfn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tribes/error.hpp"
#include "tribes/kernels.hpp"

namespace tribes {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based SplitMix64: word `word` of sample `sample` is a pure
// function of (seed, sample, word).
void draw_assignment(Assignment& x, std::uint64_t seed, std::uint64_t sample) {
  auto words = x.words();
  const std::uint64_t stream = mix64(seed ^ mix64(sample + kGoldenGamma));
  for (std::size_t w = 0; w < words.size(); ++w) {
    words[w] = mix64(stream + (w + 1) * kGoldenGamma);
  }
}

std::size_t word_count(unsigned vars) {
  return vars <= 6 ? 1 : std::size_t{1} << (vars - 6);
}

SampledEstimate finish(std::uint64_t hits, std::uint64_t samples) {
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), hits,
          samples};
}

}  // namespace

// --- TribesFunction / Assignment ---------------------------------------------

std::size_t TribesFunction::relevant() const noexcept {
  return std::accumulate(tribe_sizes.begin(), tribe_sizes.end(), std::size_t{0});
}

std::size_t TribesFunction::tribe_of(std::size_t position) const noexcept {
  std::size_t end = 0;
  for (std::size_t i = 0; i < tribe_sizes.size(); ++i) {
    end += tribe_sizes[i];
    if (position < end) return i;
  }
  return tribe_sizes.size();
}

Assignment::Assignment(std::size_t size)
    : words_((size + 63) / 64, 0), size_(size) {}

Assignment::Assignment(std::initializer_list<int> bits) : Assignment(bits.size()) {
  std::size_t i = 0;
  for (const int bit : bits) {
    if (bit != 0 && bit != 1) {
      throw std::invalid_argument("Assignment entries must be 0 or 1");
    }
    set(i++, bit == 1);
  }
}

void Assignment::set(std::size_t i, bool value) noexcept {
  const std::uint64_t bit = std::uint64_t{1} << (i % 64);
  if (value) {
    words_[i / 64] |= bit;
  } else {
    words_[i / 64] &= ~bit;
  }
}

// --- TruthTable ---------------------------------------------------------------

TruthTable::TruthTable(unsigned vars) : vars_(vars) {
  if (vars > 40) {
    throw std::invalid_argument("TruthTable: " + std::to_string(vars) +
                                " variables is beyond any sane capacity");
  }
  words_.assign(word_count(vars), 0);
}

void TruthTable::set(std::uint64_t b, bool value) noexcept {
  const std::uint64_t bit = std::uint64_t{1} << (b & 63);
  if (value) {
    words_[b >> 6] |= bit;
  } else {
    words_[b >> 6] &= ~bit;
  }
}

TruthTable tribes_truth_table(const TribesFunction& f, unsigned cap) {
  const std::size_t t = f.relevant();
  if (t > cap) {
    throw CapacityExceeded("truth table needs " + std::to_string(t) +
                           " variables, cap is " + std::to_string(cap));
  }
  TruthTable tt(static_cast<unsigned>(t));
  kernels::active().fill_tribes(tt.words(), f.tribe_sizes);
  return tt;
}

bool evaluate(const TribesFunction& f, const Assignment& x) {
  const std::size_t t = f.relevant();
  if (x.size() < t) {
    throw std::invalid_argument("evaluate: assignment has " +
                                std::to_string(x.size()) + " entries, need " +
                                std::to_string(t));
  }
  std::size_t position = 0;
  for (const std::uint32_t size : f.tribe_sizes) {
    bool all = true;
    for (std::uint32_t k = 0; k < size && all; ++k) all = x[position + k];
    if (all) return true;
    position += size;
  }
  return false;
}

Dyadic expectation(const TruthTable& tt) {
  const std::uint64_t ones = kernels::active().popcount(tt.words());
  return Dyadic(mpz_class(static_cast<unsigned long>(ones)), tt.vars());
}

Dyadic influence(const TruthTable& tt, unsigned var) {
  if (var >= tt.vars()) {
    throw std::invalid_argument("influence: variable " + std::to_string(var) +
                                " out of range for " +
                                std::to_string(tt.vars()) + " variables");
  }
  const std::uint64_t flips = kernels::active().flip_diff_count(tt.words(), var);
  return Dyadic(mpz_class(static_cast<unsigned long>(flips)), tt.vars());
}

Dyadic variance(const TruthTable& tt) {
  const Dyadic e = expectation(tt);
  return e * one_minus(e);
}

bool is_monotone(const TruthTable& tt) {
  const auto& k = kernels::active();
  for (unsigned var = 0; var < tt.vars(); ++var) {
    if (k.monotone_violations(tt.words(), var) != 0) return false;
  }
  return true;
}

SampledEstimate influence_sampled(const TribesFunction& f, std::size_t position,
                                  std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) {
    throw std::invalid_argument("influence_sampled: samples must be >= 1");
  }
  if (position >= std::max(f.n, f.relevant())) {
    throw std::invalid_argument("influence_sampled: position " +
                                std::to_string(position) + " out of range");
  }
  // Positions past the last tribe are never read by f.
  if (position >= f.relevant()) return finish(0, samples);

  Assignment x(f.relevant());
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    draw_assignment(x, seed, s);
    const bool before = evaluate(f, x);
    x.flip(position);
    if (evaluate(f, x) != before) ++hits;
  }
  return finish(hits, samples);
}

SampledEstimate expectation_sampled(const TribesFunction& f,
                                    std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) {
    throw std::invalid_argument("expectation_sampled: samples must be >= 1");
  }
  Assignment x(f.relevant());
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    draw_assignment(x, seed, s);
    if (evaluate(f, x)) ++hits;
  }
  return finish(hits, samples);
}

}  // namespace tribes
